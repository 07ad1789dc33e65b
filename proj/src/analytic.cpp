// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/analytic.hpp"

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "rtn/special_functions.hpp"

namespace rtn {

namespace {

void require_symmetric(const TelegraphSource& s, const char* op) {
  if (!s.is_symmetric()) {
    throw DomainError(std::string(op) + " requires tau_plus == tau_minus; use char_fn_general");
  }
}

// exp(-L) cosh(u) and exp(-L) sinh(u)/u for the two-state propagator, where
// L = (lp + lm)/2, beta = (lm - lp)/2 + i z and u^2 = beta^2 + lp lm.
struct Propagator {
  Complex c;
  Complex s;
  Complex beta;
};

Propagator propagate(double lp, double lm, double z) {
  const double L = 0.5 * (lp + lm);
  const Complex beta(0.5 * (lm - lp), z);
  const Complex u2 = beta * beta + lp * lm;
  if (std::abs(u2) < 1.0) {
    const double damp = std::exp(-L);
    return {damp * kernel_cosh_even(u2), damp * kernel_sinch_even(u2), beta};
  }
  const Complex u = std::sqrt(u2);
  // u - L without cancellation: u^2 - L^2 = -z^2 + i z (lm - lp).
  const Complex shift = Complex(-z * z, z * (lm - lp)) / (u + L);
  const Complex up = std::exp(shift);
  const Complex down = std::exp(-u - L);
  return {0.5 * (up + down), (up - down) / (2.0 * u), beta};
}

Complex positive_start(double lp, double lm, double z) {
  const Propagator p = propagate(lp, lm, z);
  return p.c + (lp + p.beta) * p.s;
}

}  // namespace

double cos_expectation_symmetric(const TelegraphSource& source, const EvaluationPoint& point) {
  source.validate();
  point.validate();
  require_symmetric(source, "cos_expectation_symmetric");
  const double t = point.t;
  const double z = point.m * source.delta * t;
  if (t == 0.0 || z == 0.0) return 1.0;
  const double lambda = t / source.tau_plus;
  const double w = lambda * lambda - z * z;
  double value;
  if (w >= 1.0) {
    const double s = std::sqrt(w);
    const double shift = -z * z / (s + lambda);  // s - lambda
    value = 0.5 * std::exp(shift) * (1.0 + lambda / s) +
            0.5 * std::exp(-s - lambda) * (1.0 - lambda / s);
  } else {
    value = std::exp(-lambda) * (kernel_cosh_even(w) + lambda * kernel_sinch_even(w));
  }
  return std::clamp(value, -1.0, 1.0);
}

ComplexValue char_fn_general(const TelegraphSource& source, const EvaluationPoint& point,
                             StartPolicy start) {
  source.validate();
  point.validate();
  const double t = point.t;
  if (t == 0.0) return {1.0, 0.0};
  const double lp = t / source.tau_plus;
  const double lm = t / source.tau_minus;
  const double z = point.m * source.delta * t;
  if (z == 0.0) return {1.0, 0.0};

  // A negative start is a positive start of the mirrored source observed
  // through -theta, i.e. the conjugate with the rates swapped.
  switch (start) {
    case StartPolicy::positive: return ComplexValue(positive_start(lp, lm, z));
    case StartPolicy::negative: return ComplexValue(std::conj(positive_start(lm, lp, z)));
    case StartPolicy::mixed: break;
  }
  Complex acc(0.0, 0.0);
  if (source.p_plus > 0) acc += source.p_plus * positive_start(lp, lm, z);
  if (source.p_plus < 1) acc += (1.0 - source.p_plus) * std::conj(positive_start(lm, lp, z));
  return ComplexValue(acc);
}

ComplexValue multi_source_char_fn(std::span<const TelegraphSource> sources,
                                  const EvaluationPoint& point) {
  Complex acc(1.0, 0.0);
  for (const auto& s : sources) acc *= char_fn_general(s, point, StartPolicy::mixed).as_complex();
  return ComplexValue(acc);
}

Transfer segment_transfer(const TelegraphSource& source, double signed_m, double duration) {
  source.validate();
  if (!(duration >= 0)) throw DomainError("segment duration must be >= 0");
  if (duration == 0.0) return Transfer::identity();
  const double lp = duration / source.tau_plus;
  const double lm = duration / source.tau_minus;
  const Propagator p = propagate(lp, lm, signed_m * source.delta * duration);
  return {p.c + p.beta * p.s, lp * p.s, lm * p.s, p.c - p.beta * p.s};
}

double conditional_char_fn_symmetric(double theta_c, double m, int f) {
  if (!(theta_c > 0)) throw DomainError("theta_c must be > 0");
  if (f < 0) throw DomainError("flip count must be >= 0");
  const double z = m * theta_c;
  if (f == 0) return std::cos(z);
  const int odd = (f % 2 == 1) ? f : f - 1;
  // f! j_k(z) / (k! (2z)^k) with k = (f-1)/2 equals (2k+1)!! j_k(z)/z^k.
  return spherical_bessel_j_normalized((odd - 1) / 2, z);
}

double conditional_moment(double theta_c, int k, int f) {
  if (!(theta_c > 0)) throw DomainError("theta_c must be > 0");
  if (k < 0) throw DomainError("moment order must be >= 0");
  if (f < 0) throw DomainError("flip count must be >= 0");
  if (k % 2 == 1) return 0.0;
  double value = std::pow(theta_c, k);
  if (f == 0) return value;
  const int odd = (f % 2 == 1) ? f : f - 1;
  for (int i = 1; i <= k / 2; ++i) value *= (2.0 * i - 1.0) / (odd + 2.0 * i);
  return value;
}

int poisson_truncation(double lambda) {
  if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
  return static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 30.0));
}

double poisson_pmf(double lambda, int f) {
  if (f < 0) return 0.0;
  if (lambda == 0.0) return f == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(lambda), f);
}

double cos_expectation_poisson_series(const TelegraphSource& source,
                                      const EvaluationPoint& point) {
  source.validate();
  point.validate();
  require_symmetric(source, "cos_expectation_poisson_series");
  const double theta_c = source.delta * point.t;
  if (point.t == 0.0 || theta_c == 0.0) return 1.0;
  const double lambda = point.t / source.tau_plus;
  const int n = poisson_truncation(lambda);
  double sum = 0.0;
  // Even f shares the odd f-1 value, so evaluate once per pair.
  sum += poisson_pmf(lambda, 0) * std::cos(point.m * theta_c);
  for (int f = 1; f <= n; f += 2) {
    const double e = conditional_char_fn_symmetric(theta_c, point.m, f);
    sum += (poisson_pmf(lambda, f) + poisson_pmf(lambda, f + 1)) * e;
  }
  return sum;
}

double variance_shape(double lambda) {
  if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
  if (lambda < 0.5) {
    // sum_j 2 (-2 lambda)^j / (j+2)!
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 60; ++j) {
      term *= -2.0 * lambda / (j + 2.0);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return 1.0 / lambda + std::expm1(-2.0 * lambda) / (2.0 * lambda * lambda);
}

double variance_symmetric(const TelegraphSource& source, double t) {
  source.validate();
  require_symmetric(source, "variance_symmetric");
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  const double theta_c = source.delta * t;
  return theta_c * theta_c * variance_shape(t / source.tau_plus);
}

double tau_mean_power_law(double alpha, double tau_b) {
  if (!(alpha > 1)) throw DomainError("alpha must be > 1");
  if (!(tau_b > 0)) throw DomainError("tau_b must be > 0");
  return (alpha - 1.0) / alpha * tau_b;
}

double gaussian_cos_expectation(double m, double sigma) {
  if (!(sigma >= 0)) throw DomainError("sigma must be >= 0");
  return std::exp(-0.5 * m * m * sigma * sigma);
}

double gaussian_moment(int n, double sigma) {
  if (!(sigma >= 0)) throw DomainError("sigma must be >= 0");
  if (n < 0) throw DomainError("moment order must be >= 0");
  if (n % 2 == 1) return 0.0;
  double value = 1.0;
  for (int k = n - 1; k > 1; k -= 2) value *= k;
  return value * std::pow(sigma, n);
}

double approx_cos_expectation(const TelegraphSource& source, const EvaluationPoint& point,
                              ApproxRegime regime) {
  source.validate();
  point.validate();
  require_symmetric(source, "approx_cos_expectation");
  const double tau = source.tau_plus;
  const double z = point.m * source.delta * point.t;
  switch (regime) {
    case ApproxRegime::gaussian_limit:
      return std::exp(-0.5 * point.t * point.m * point.m * source.delta * source.delta * tau);
    case ApproxRegime::first_order_lambda: {
      const double lambda = point.t / tau;
      return std::cos(z) + lambda * (kernel_sinch_even(-z * z) - std::cos(z));
    }
    case ApproxRegime::no_flip: return std::cos(z);
  }
  return std::cos(z);
}

ApproxRegime parse_approx_regime(const std::string& name) {
  if (name == "gaussian_limit") return ApproxRegime::gaussian_limit;
  if (name == "first_order_lambda") return ApproxRegime::first_order_lambda;
  if (name == "no_flip") return ApproxRegime::no_flip;
  throw DomainError("unknown regime '" + name +
                    "' (expected gaussian_limit|first_order_lambda|no_flip)");
}

}  // namespace rtn
