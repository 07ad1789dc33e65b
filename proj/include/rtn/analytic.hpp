// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "rtn/types.hpp"

namespace rtn {

// ---------------------------------------------------------------------------
// Single source, characteristic functions
// ---------------------------------------------------------------------------

/// E[cos(m theta)] for a source with tau_plus == tau_minus.
///
/// Evaluated as exp(-lambda) (Kc + lambda Ks) with the even kernels at
/// lambda^2 - z^2, z = m delta t. When sqrt(lambda^2 - z^2) >= 1 the
/// exponentials are folded together so that lambda can be very large.
/// Independent of the start state. Throws DomainError for asymmetric sources.
double cos_expectation_symmetric(const TelegraphSource& source, const EvaluationPoint& point);

/// E[exp(i m theta)] for arbitrary dwell times and start policy.
ComplexValue char_fn_general(const TelegraphSource& source, const EvaluationPoint& point,
                             StartPolicy start);

/// Product of per-source characteristic functions, each with a mixed start
/// drawn from its own p_plus. An empty list gives 1.
ComplexValue multi_source_char_fn(std::span<const TelegraphSource> sources,
                                  const EvaluationPoint& point);

// ---------------------------------------------------------------------------
// Flip-conditioned quantities (equal dwell times, equiprobable start)
// ---------------------------------------------------------------------------

/// E[exp(i m theta) | f flips]. Real. Even f > 0 shares the value of f - 1;
/// f = 0 gives cos(m theta_c).
double conditional_char_fn_symmetric(double theta_c, double m, int f);

/// E[theta^k | f flips] for even k; odd k returns exactly 0.
double conditional_moment(double theta_c, int k, int f);

/// Smallest flip count past which the Poisson(lambda) tail is negligible:
/// ceil(lambda + 12 sqrt(lambda) + 30).
int poisson_truncation(double lambda);

/// Poisson probability mass exp(-lambda) lambda^f / f!.
double poisson_pmf(double lambda, int f);

/// E[cos(m theta)] summed over flip counts with conditional expectations.
/// Second route to cos_expectation_symmetric.
double cos_expectation_poisson_series(const TelegraphSource& source,
                                      const EvaluationPoint& point);

// ---------------------------------------------------------------------------
// Density of theta
// ---------------------------------------------------------------------------

struct DensityValue {
  double continuous = 0.0;  // density of the f >= 1 part at theta
  double atom_plus = 0.0;   // point mass at +theta_c
  double atom_minus = 0.0;  // point mass at -theta_c
};

/// Density of theta at time t, summed over f = 1..max_flips.
///
/// With max_flips < 0 the truncation is chosen so that the omitted flip-count
/// mass is below 1e-12: poisson_truncation(max(lambda_plus, lambda_minus)).
/// Throws DomainError for |theta| > theta_c or t <= 0.
DensityValue density_eval(const TelegraphSource& source, double t, double theta,
                          StartPolicy start = StartPolicy::mixed, int max_flips = -1);

/// Contribution of exactly f >= 1 flips to the positive-start density.
double flip_density_positive_start(const FlipRates& rates, double theta, int f);

// ---------------------------------------------------------------------------
// Variance
// ---------------------------------------------------------------------------

/// Var(theta) = E[theta^2] for a symmetric source.
double variance_symmetric(const TelegraphSource& source, double t);

/// theta_c^2 (1/lambda + (exp(-2 lambda) - 1)/(2 lambda^2)) / theta_c^2, the
/// variance per unit theta_c^2 as a function of lambda; 1 at lambda = 0.
double variance_shape(double lambda);

/// A population of r telegraph sources whose dwell times are spread over
/// [tau_b, tau_a] log-uniformly, or over (0, tau_b] with density
/// (alpha-1) tau^(alpha-2) / tau_b^(alpha-1) when alpha is set.
struct OneOverFEnsemble {
  int r = 1;
  double tau_a = 1.0;
  double tau_b = 1.0;
  double delta_mean = 1.0;
  double delta_sd = 0.0;
  std::optional<double> alpha;

  void validate() const;
  [[nodiscard]] double mean_delta_squared() const {
    return delta_mean * delta_mean + delta_sd * delta_sd;
  }
};

enum class OneOverFMode { approx, quadrature };

/// Total Var(theta) of the ensemble at time t.
///
/// approx uses the large-lambda form r t E[delta^2] (tau_a - tau_b)/log(tau_a/tau_b)
/// (or r t E[delta^2] tau_m with a power law). quadrature integrates the exact
/// single-source variance over the dwell-time density.
double variance_one_over_f(const OneOverFEnsemble& ensemble, double t, OneOverFMode mode);

/// True when approx mode is outside its intended regime: lambda_a or lambda_b below 10
/// (lambda_b alone for a power law).
bool one_over_f_approx_questionable(const OneOverFEnsemble& ensemble, double t);

/// Mean dwell time (alpha-1)/alpha * tau_b of the power-law density.
double tau_mean_power_law(double alpha, double tau_b);

// ---------------------------------------------------------------------------
// Gaussian noise and approximations
// ---------------------------------------------------------------------------

/// E[cos(m x)] for x ~ N(0, sigma^2).
double gaussian_cos_expectation(double m, double sigma);

/// E[x^n] for x ~ N(0, sigma^2); zero for odd n.
double gaussian_moment(int n, double sigma);

enum class ApproxRegime { gaussian_limit, first_order_lambda, no_flip };

/// Approximate E[cos(m theta)] for a symmetric source:
///   gaussian_limit      exp(-t m^2 delta^2 tau_c / 2)
///   first_order_lambda  cos z + lambda (sinc z - cos z)
///   no_flip             cos z
double approx_cos_expectation(const TelegraphSource& source, const EvaluationPoint& point,
                              ApproxRegime regime);

ApproxRegime parse_approx_regime(const std::string& name);

// ---------------------------------------------------------------------------
// Two-state propagator
// ---------------------------------------------------------------------------

/// exp(d (Q + i m s delta diag(1, -1))) for a segment of length d, in the
/// basis (positive, negative). Entry (a, b) is E[exp(i m s theta_seg); end in b | start in a].
struct Transfer {
  Complex pp, pn, np, nn;

  friend Transfer operator*(const Transfer& a, const Transfer& b) {
    return {a.pp * b.pp + a.pn * b.np, a.pp * b.pn + a.pn * b.nn,
            a.np * b.pp + a.nn * b.np, a.np * b.pn + a.nn * b.nn};
  }
  static Transfer identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// Segment propagator. `signed_m` folds the segment's sign into m.
Transfer segment_transfer(const TelegraphSource& source, double signed_m, double duration);

}  // namespace rtn
