// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <complex>

#include "rtn/analytic.hpp"
#include "rtn/monte_carlo.hpp"

namespace {

using rtn::StartPolicy;
using rtn::TelegraphSource;

template <typename F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Resummed positive-start density: the odd-flip terms add up to a modified
// Bessel I0 and the even-flip terms to I1.
double bessel_form(const TelegraphSource& s, double t, double theta) {
  const double lp = t / s.tau_plus, lm = t / s.tau_minus, theta_c = s.delta * t;
  const double rho = theta / theta_c;
  const double y = lp * lm * (1 - rho * rho) / 4;
  const double h = std::exp(lm * (rho - 1) / 2 - lp * (rho + 1) / 2);
  const double x = 2 * std::sqrt(y);
  const double odd = h * lp / (2 * theta_c) * boost::math::cyl_bessel_i(0, x);
  const double even = y > 0 ? h * lp * lm * (1 + rho) / (4 * theta_c) *
                                  boost::math::cyl_bessel_i(1, x) / std::sqrt(y)
                            : h * lp * lm * (1 + rho) / (4 * theta_c);
  return odd + even;
}

TEST(Density, BesselResummation) {
  for (const TelegraphSource& s :
       {TelegraphSource{1.0, 0.5, 2.0, 1.0}, TelegraphSource{0.3, 3.0, 0.2, 1.0},
        TelegraphSource{2.0, 0.05, 0.08, 1.0}}) {
    for (double t : {0.3, 1.0, 4.0}) {
      const double theta_c = s.delta * t;
      for (double rho : {-0.999, -0.6, 0.0, 0.25, 0.9, 0.999}) {
        const double want = bessel_form(s, t, rho * theta_c);
        const auto got = rtn::density_eval(s, t, rho * theta_c, StartPolicy::positive);
        EXPECT_NEAR(got.continuous, want, 1e-12 * std::max(1.0, want)) << t << " " << rho;
        EXPECT_EQ(got.atom_minus, 0.0);
        EXPECT_NEAR(got.atom_plus, std::exp(-t / s.tau_plus), 1e-15);
      }
    }
  }
}

TEST(Density, FirstTwoFlipTermsFromOrderStatistics) {
  // One flip at s: theta = delta (2s - t); weight e^{-s/tp - (t-s)/tm}/tp.
  // Two flips with positive time x: weight x e^{-x/tp - (t-x)/tm}/(tp tm).
  const TelegraphSource s{1.5, 0.7, 1.9, 1.0};
  const double t = 1.3;
  const auto rates = rtn::FlipRates::of(s, t);
  for (double rho : {-0.8, -0.1, 0.4, 0.95}) {
    const double theta = rho * rates.theta_c;
    const double x = (theta / s.delta + t) / 2;
    const double jac = 1 / (2 * s.delta);
    const double surv = std::exp(-x / s.tau_plus - (t - x) / s.tau_minus);
    EXPECT_NEAR(rtn::flip_density_positive_start(rates, theta, 1), surv / s.tau_plus * jac, 1e-14);
    EXPECT_NEAR(rtn::flip_density_positive_start(rates, theta, 2),
                x * surv / (s.tau_plus * s.tau_minus) * jac, 1e-14);
  }
  EXPECT_THROW(rtn::flip_density_positive_start(rates, 0.0, 0), rtn::DomainError);
}

TEST(Density, SymmetricIsEvenWithEqualAtoms) {
  const auto s = TelegraphSource::symmetric(1.0, 0.8);
  const double t = 2.0;
  const double atom = std::exp(-t / 0.8) / 2;
  for (double theta : {0.1, 0.7, 1.5, 1.99}) {
    const auto a = rtn::density_eval(s, t, theta);
    const auto b = rtn::density_eval(s, t, -theta);
    EXPECT_NEAR(a.continuous, b.continuous, 1e-14 * a.continuous);
    EXPECT_NEAR(a.atom_plus, atom, 1e-16);
    EXPECT_NEAR(a.atom_minus, atom, 1e-16);
  }
}

TEST(Density, Normalization) {
  for (const TelegraphSource& s :
       {TelegraphSource::symmetric(1.0, 1.0), TelegraphSource{1.0, 0.5, 2.0, 0.3},
        TelegraphSource{0.4, 10.0, 0.1, 0.8}, TelegraphSource::symmetric(1.0, 0.02)}) {
    for (auto start : {StartPolicy::positive, StartPolicy::negative, StartPolicy::mixed}) {
      for (double t : {0.2, 1.0, 3.0}) {
        const double theta_c = s.delta * t;
        const double cont = integrate(
            [&](double th) { return rtn::density_eval(s, t, th, start).continuous; }, -theta_c, theta_c);
        const auto edge = rtn::density_eval(s, t, 0.0, start);
        EXPECT_NEAR(cont + edge.atom_plus + edge.atom_minus, 1.0, 1e-8)
            << rtn::to_string(start) << " " << t << " " << s.tau_plus;
      }
    }
  }
}

TEST(Density, FourierTransformMatchesCharFn) {
  for (const TelegraphSource& s :
       {TelegraphSource::symmetric(1.0, 1.0), TelegraphSource{1.0, 0.5, 2.0, 0.3},
        TelegraphSource{0.7, 3.0, 0.25, 1.0}}) {
    for (auto start : {StartPolicy::positive, StartPolicy::mixed}) {
      const double t = 1.2;
      const double theta_c = s.delta * t;
      for (double m : {0.5, 2.0, 6.0}) {
        const double re = integrate(
            [&](double th) { return std::cos(m * th) * rtn::density_eval(s, t, th, start).continuous; },
            -theta_c, theta_c);
        const double im = integrate(
            [&](double th) { return std::sin(m * th) * rtn::density_eval(s, t, th, start).continuous; },
            -theta_c, theta_c);
        const auto atoms = rtn::density_eval(s, t, 0.0, start);
        const std::complex<double> phase = std::polar(1.0, m * theta_c);
        const auto total = std::complex<double>(re, im) + atoms.atom_plus * phase +
                           atoms.atom_minus * std::conj(phase);
        const auto want = rtn::char_fn_general(s, {m, t}, start).as_complex();
        EXPECT_LT(std::abs(total - want), 1e-6) << m;
      }
    }
  }
}

TEST(Density, ManyFlipsStayFinite) {
  const auto s = TelegraphSource::symmetric(1.0, 1e-3);
  const double t = 2.0;  // lambda = 2000
  const auto v = rtn::density_eval(s, t, 0.0);
  ASSERT_TRUE(std::isfinite(v.continuous));
  // Near-Gaussian with variance ~ delta^2 tau t.
  const double sigma = std::sqrt(rtn::variance_symmetric(s, t));
  EXPECT_NEAR(v.continuous * sigma * std::sqrt(2 * M_PI), 1.0, 1e-3);
  EXPECT_EQ(v.atom_plus, std::exp(-2000.0) / 2);
}

TEST(Density, DomainErrors) {
  const auto s = TelegraphSource::symmetric(1.0, 1.0);
  EXPECT_THROW(rtn::density_eval(s, 1.0, 1.0001), rtn::DomainError);
  EXPECT_THROW(rtn::density_eval(s, 0.0, 0.0), rtn::DomainError);
  EXPECT_THROW(rtn::density_eval(TelegraphSource::symmetric(0.0, 1.0), 1.0, 0.0), rtn::DomainError);
  EXPECT_NO_THROW(rtn::density_eval(s, 1.0, -1.0));
}

TEST(Density, MatchesMonteCarloHistogramAtCentre) {
  // tau_minus = 2, tau_plus = 0.5, positive start, 1e7 paths, bins of 0.01 theta_c.
  const TelegraphSource s{1.0, 0.5, 2.0, 1.0};
  const double t = 1.0;
  rtn::mc::Settings settings;
  settings.n_samples = 10'000'000;
  settings.seed = 2024;
  const auto hist = rtn::mc::estimate_histogram(s, t, StartPolicy::positive, 200, settings);
  ASSERT_EQ(hist.density.size(), 200u);
  for (std::size_t bin : {99u, 100u}) {  // the two bins touching theta = 0
    const double a = hist.edges[bin], b = hist.edges[bin + 1];
    const double want =
        integrate([&](double th) { return rtn::density_eval(s, t, th, StartPolicy::positive).continuous; },
                  a, b) / (b - a);
    EXPECT_LE(std::abs(hist.density[bin] - want), 4 * hist.density_se[bin])
        << bin << " mc=" << hist.density[bin] << " se=" << hist.density_se[bin] << " want=" << want;
  }
  EXPECT_LE(std::abs(hist.atom_plus.mean - std::exp(-2.0)), 4 * hist.atom_plus.std_error);
  EXPECT_EQ(hist.atom_minus.mean, 0.0);
}

}  // namespace
