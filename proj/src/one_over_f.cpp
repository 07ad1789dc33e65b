// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "rtn/analytic.hpp"

namespace rtn {

namespace {

// Var(theta)/delta^2 of one symmetric source with dwell time tau.
double unit_variance(double tau, double t) {
  if (tau <= 0.0) return 0.0;
  return t * t * variance_shape(t / tau);
}

template <typename F>
double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12, &err);
}

}  // namespace

void OneOverFEnsemble::validate() const {
  if (r < 1) throw DomainError("ensemble size r must be >= 1");
  if (!(tau_b > 0)) throw DomainError("tau_b must be > 0");
  if (alpha) {
    if (!(*alpha > 1)) throw DomainError("alpha must be > 1");
  } else if (!(tau_a >= tau_b)) {
    throw DomainError("tau_a must be >= tau_b");
  }
  if (!(delta_mean >= 0)) throw DomainError("delta_mean must be >= 0");
  if (!(delta_sd >= 0)) throw DomainError("delta_sd must be >= 0");
}

bool one_over_f_approx_questionable(const OneOverFEnsemble& e, double t) {
  if (e.alpha) return t / e.tau_b < 10.0;
  return t / e.tau_a < 10.0 || t / e.tau_b < 10.0;
}

double variance_one_over_f(const OneOverFEnsemble& e, double t, OneOverFMode mode) {
  e.validate();
  if (!(t > 0)) throw DomainError("t must be > 0");
  const double scale = e.r * e.mean_delta_squared();

  if (e.alpha) {
    if (mode == OneOverFMode::approx) return scale * t * tau_mean_power_law(*e.alpha, e.tau_b);
    // With s = (tau/tau_b)^(alpha-1) the density becomes uniform on [0, 1].
    const double inv = 1.0 / (*e.alpha - 1.0);
    const auto f = [&](double s) { return unit_variance(e.tau_b * std::pow(s, inv), t); };
    return scale * integrate(f, 0.0, 1.0);
  }

  const double w_minus_1 = (e.tau_a - e.tau_b) / e.tau_b;
  const double log_w = std::log1p(w_minus_1);
  if (mode == OneOverFMode::approx) {
    if (log_w == 0.0) return scale * t * e.tau_b;
    return scale * t * e.tau_b * w_minus_1 / log_w;
  }
  if (log_w == 0.0) return scale * unit_variance(e.tau_b, t);
  // Log-uniform in tau is uniform in log tau.
  const auto f = [&](double u) { return unit_variance(std::exp(u), t); };
  return scale * integrate(f, std::log(e.tau_b), std::log(e.tau_a)) / log_w;
}

}  // namespace rtn
