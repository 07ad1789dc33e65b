// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "rtn/analytic.hpp"

namespace rtn {

namespace {

// log h(theta) with rho = theta / theta_c: the survival factor for the time
// split (1+rho)t/2 in the positive state and (1-rho)t/2 in the negative one.
double log_survival(const FlipRates& r, double rho) {
  return 0.5 * r.lambda_minus * (rho - 1.0) - 0.5 * r.lambda_plus * (rho + 1.0);
}

// Sum of the positive-start flip densities for f = 1..max_flips.
//   odd  f = 2n+1: h lp/(2 theta_c) y^n / (n!)^2
//   even f = 2n:   h lp lm (1+rho)/(4 theta_c) y^(n-1) / (n! (n-1)!)
// with y = lp lm (1 - rho^2)/4. Terms are formed in log space since y^n and
// the survival factor can individually leave double range.
double positive_start_continuous(const FlipRates& r, double theta, int max_flips) {
  double sum = 0.0;
  for (int f = 1; f <= max_flips; ++f) sum += flip_density_positive_start(r, theta, f);
  return sum;
}

}  // namespace

double flip_density_positive_start(const FlipRates& r, double theta, int f) {
  if (f < 1) throw DomainError("flip_density_positive_start: f must be >= 1");
  const double rho = theta / r.theta_c;
  const double lp = r.lambda_plus;
  const double lm = r.lambda_minus;
  if (lp == 0.0) return 0.0;
  const double one_minus_rho2 = std::max(0.0, (1.0 - rho) * (1.0 + rho));
  const double log_h = log_survival(r, rho);
  if (f % 2 == 1) {
    const int n = (f - 1) / 2;
    const double base = std::log(lp / (2.0 * r.theta_c));
    if (n == 0) return std::exp(log_h + base);
    if (lm == 0.0 || one_minus_rho2 == 0.0) return 0.0;
    const double log_y = std::log(lp * lm * one_minus_rho2 / 4.0);
    return std::exp(log_h + base + n * log_y - 2.0 * std::lgamma(n + 1.0));
  }
  const int n = f / 2;
  if (lm == 0.0 || rho <= -1.0) return 0.0;
  const double base = std::log(lp * lm * (1.0 + rho) / (4.0 * r.theta_c));
  if (n == 1) return std::exp(log_h + base);
  if (one_minus_rho2 == 0.0) return 0.0;
  const double log_y = std::log(lp * lm * one_minus_rho2 / 4.0);
  return std::exp(log_h + base + (n - 1) * log_y - std::lgamma(n + 1.0) - std::lgamma(n + 0.0));
}

DensityValue density_eval(const TelegraphSource& source, double t, double theta,
                          StartPolicy start, int max_flips) {
  source.validate();
  if (!(t > 0)) throw DomainError("density_eval: t must be > 0");
  const FlipRates rates = FlipRates::of(source, t);
  if (!(rates.theta_c > 0)) throw DomainError("density_eval: theta_c = delta t must be > 0");
  if (!(std::abs(theta) <= rates.theta_c)) {
    throw DomainError("density_eval: |theta| exceeds theta_c");
  }
  if (max_flips < 0) {
    max_flips = poisson_truncation(std::max(rates.lambda_plus, rates.lambda_minus));
  }

  double p_plus = source.p_plus;
  if (start == StartPolicy::positive) p_plus = 1.0;
  if (start == StartPolicy::negative) p_plus = 0.0;

  const FlipRates mirrored{rates.lambda_minus, rates.lambda_plus, rates.theta_c};
  DensityValue out;
  if (p_plus > 0) {
    out.continuous += p_plus * positive_start_continuous(rates, theta, max_flips);
    out.atom_plus = p_plus * std::exp(-rates.lambda_plus);
  }
  if (p_plus < 1) {
    out.continuous += (1.0 - p_plus) * positive_start_continuous(mirrored, -theta, max_flips);
    out.atom_minus = (1.0 - p_plus) * std::exp(-rates.lambda_minus);
  }
  return out;
}

}  // namespace rtn
