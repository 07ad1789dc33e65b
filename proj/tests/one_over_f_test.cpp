// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "rtn/analytic.hpp"
#include "rtn/monte_carlo.hpp"

namespace {

using rtn::OneOverFEnsemble;
using rtn::OneOverFMode;

// Per source Var/delta^2 = t tau - tau^2/2 + tau^2 exp(-2t/tau)/2. Averaged
// over the dwell-time density, the last term has a closed form in the
// generalized exponential integrals E_n.
double log_uniform_closed_form(double tau_a, double tau_b, double t) {
  const double L = std::log(tau_a / tau_b);
  const double c = 2 * t;
  using boost::math::expint;
  const double tail = tau_a * tau_a * expint(3, c / tau_a) - tau_b * tau_b * expint(3, c / tau_b);
  return (t * (tau_a - tau_b) - (tau_a * tau_a - tau_b * tau_b) / 4 + tail / 2) / L;
}

double power_law_closed_form(int alpha, double tau_b, double t) {
  const double a = alpha;
  const double mean_tau = (a - 1) / a * tau_b;
  const double mean_tau2 = (a - 1) / (a + 1) * tau_b * tau_b;
  const double tail = (a - 1) / 2 * tau_b * tau_b * boost::math::expint(alpha + 2, 2 * t / tau_b);
  return t * mean_tau - mean_tau2 / 2 + tail;
}

TEST(OneOverF, SingleDwellTimeLimit) {
  const OneOverFEnsemble e{1, 0.5, 0.5, 1.0, 0.0, {}};
  EXPECT_NEAR(rtn::variance_one_over_f(e, 3.0, OneOverFMode::approx), 3.0 * 0.5, 1e-15);
  EXPECT_NEAR(rtn::variance_one_over_f(e, 3.0, OneOverFMode::quadrature),
              rtn::variance_symmetric(rtn::TelegraphSource::symmetric(1.0, 0.5), 3.0), 1e-14);
  // A band barely wider than a point approaches the same value.
  const OneOverFEnsemble narrow{1, 0.5 * (1 + 1e-12), 0.5, 1.0, 0.0, {}};
  EXPECT_NEAR(rtn::variance_one_over_f(narrow, 3.0, OneOverFMode::approx), 1.5, 1e-11);
}

TEST(OneOverF, ApproxBounds) {
  for (double w : {1.5, 10.0, 1e4}) {
    for (double t : {0.1, 5.0}) {
      const OneOverFEnsemble e{3, 0.02 * w, 0.02, 1.2, 0.3, {}};
      const double v = rtn::variance_one_over_f(e, t, OneOverFMode::approx);
      const double unit = e.r * e.mean_delta_squared() * t;
      EXPECT_GE(v, unit * e.tau_b);
      EXPECT_LE(v, unit * e.tau_a);
    }
  }
}

TEST(OneOverF, QuadratureMatchesExponentialIntegralForm) {
  for (double tau_b : {0.01, 0.3}) {
    for (double w : {2.0, 100.0, 1e5}) {
      for (double t : {0.05, 1.0, 30.0}) {
        const OneOverFEnsemble e{4, tau_b * w, tau_b, 0.9, 0.4, {}};
        const double scale = e.r * e.mean_delta_squared();
        const double want = scale * log_uniform_closed_form(e.tau_a, tau_b, t);
        // For t << tau_a the closed form cancels terms of size tau_a^2; allow for that.
        const double cancel = 4e-16 * scale * (t * e.tau_a + e.tau_a * e.tau_a / 4) / std::log(w);
        EXPECT_NEAR(rtn::variance_one_over_f(e, t, OneOverFMode::quadrature), want, 1e-10 * want + cancel)
            << tau_b << " " << w << " " << t;
      }
    }
  }
}

TEST(OneOverF, PowerLawQuadratureMatchesClosedForm) {
  for (int alpha : {2, 3, 5}) {
    for (double t : {0.01, 0.5, 20.0}) {
      OneOverFEnsemble e{2, 1.0, 0.4, 1.0, 0.0, static_cast<double>(alpha)};
      const double want = 2 * power_law_closed_form(alpha, 0.4, t);
      EXPECT_NEAR(rtn::variance_one_over_f(e, t, OneOverFMode::quadrature), want, 1e-9 * want)
          << alpha << " " << t;
      EXPECT_NEAR(rtn::variance_one_over_f(e, t, OneOverFMode::approx),
                  2 * t * rtn::tau_mean_power_law(alpha, 0.4), 1e-15);
    }
  }
}

TEST(OneOverF, ApproxAgreesWithQuadratureDeepInRegime) {
  const OneOverFEnsemble e{10, 1.0, 0.01, 1.0, 0.0, {}};
  const double t = 100.0;
  const double approx = rtn::variance_one_over_f(e, t, OneOverFMode::approx);
  const double quad = rtn::variance_one_over_f(e, t, OneOverFMode::quadrature);
  EXPECT_LT(std::abs(approx - quad) / quad, 0.01);
  EXPECT_FALSE(rtn::one_over_f_approx_questionable(e, t));
  EXPECT_TRUE(rtn::one_over_f_approx_questionable(e, 5.0));
}

TEST(OneOverF, ApproxGapShrinksLikeInverseFlipCount) {
  // Relative gap ~ (tau_a + tau_b)/(4 t) once both flip counts are large.
  const OneOverFEnsemble e{1, 2.0, 0.02, 1.0, 0.0, {}};
  for (double t : {100.0, 1000.0, 10000.0}) {
    const double approx = rtn::variance_one_over_f(e, t, OneOverFMode::approx);
    const double quad = rtn::variance_one_over_f(e, t, OneOverFMode::quadrature);
    EXPECT_NEAR((approx - quad) / quad, (e.tau_a + e.tau_b) / (4 * t), 0.05 * (e.tau_a + e.tau_b) / (4 * t))
        << t;
  }
}

TEST(OneOverF, Validation) {
  EXPECT_THROW(rtn::variance_one_over_f({1, 0.1, 0.2, 1.0, 0.0, {}}, 1.0, OneOverFMode::approx),
               rtn::DomainError);
  EXPECT_THROW(rtn::variance_one_over_f({0, 1.0, 0.2, 1.0, 0.0, {}}, 1.0, OneOverFMode::approx),
               rtn::DomainError);
  EXPECT_THROW(rtn::variance_one_over_f({1, 1.0, 0.2, 1.0, -1.0, {}}, 1.0, OneOverFMode::approx),
               rtn::DomainError);
  EXPECT_THROW(rtn::variance_one_over_f({1, 1.0, 0.2, 1.0, 0.0, 1.0}, 1.0, OneOverFMode::approx),
               rtn::DomainError);
  EXPECT_THROW(rtn::variance_one_over_f({1, 1.0, 0.2, 1.0, 0.0, {}}, 0.0, OneOverFMode::approx),
               rtn::DomainError);
}

TEST(OneOverF, MonteCarloEnsembleMatchesQuadrature) {
  const OneOverFEnsemble e{10, 10.0, 0.1, 1.0, 0.25, {}};
  const double t = 5.0;
  rtn::mc::Settings settings;
  settings.n_samples = 100000;
  settings.seed = 77;
  const auto est = rtn::mc::estimate_ensemble_variance(e, t, settings);
  const double quad = rtn::variance_one_over_f(e, t, OneOverFMode::quadrature);
  EXPECT_LE(std::abs(est.mean - quad), 4 * est.std_error) << est.mean << " +- " << est.std_error;
}

TEST(OneOverF, MonteCarloPowerLawMatchesQuadrature) {
  const OneOverFEnsemble e{3, 1.0, 0.5, 1.0, 0.0, 2.5};
  const double t = 2.0;
  rtn::mc::Settings settings;
  settings.n_samples = 100000;
  settings.seed = 78;
  const auto est = rtn::mc::estimate_ensemble_variance(e, t, settings);
  const double quad = rtn::variance_one_over_f(e, t, OneOverFMode::quadrature);
  EXPECT_LE(std::abs(est.mean - quad), 4 * est.std_error) << est.mean << " +- " << est.std_error;
}

}  // namespace
