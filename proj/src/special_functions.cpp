// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/special_functions.hpp"

#include <cmath>
#include <limits>

namespace rtn {

namespace {

// Four terms of sum x2^k/(2k)! and sum x2^k/(2k+1)!; the first omitted term
// is below 1e-16 * x2^4 / 8! for |x2| < 1e-4.
template <typename T>
T cosh_series(T x2) {
  return T(1) + x2 * (T(1.0 / 2) + x2 * (T(1.0 / 24) + x2 * T(1.0 / 720)));
}

template <typename T>
T sinch_series(T x2) {
  return T(1) + x2 * (T(1.0 / 6) + x2 * (T(1.0 / 120) + x2 * T(1.0 / 5040)));
}

}  // namespace

double kernel_cosh_even(double x2) {
  if (std::abs(x2) < kKernelTaylorThreshold) return cosh_series(x2);
  return x2 > 0 ? std::cosh(std::sqrt(x2)) : std::cos(std::sqrt(-x2));
}

double kernel_sinch_even(double x2) {
  if (std::abs(x2) < kKernelTaylorThreshold) return sinch_series(x2);
  if (x2 > 0) {
    const double s = std::sqrt(x2);
    return std::sinh(s) / s;
  }
  const double s = std::sqrt(-x2);
  return std::sin(s) / s;
}

Complex kernel_cosh_even(Complex w) {
  if (std::abs(w) < kKernelTaylorThreshold) return cosh_series(w);
  return std::cosh(std::sqrt(w));
}

Complex kernel_sinch_even(Complex w) {
  if (std::abs(w) < kKernelTaylorThreshold) return sinch_series(w);
  const Complex s = std::sqrt(w);
  return std::sinh(s) / s;
}

namespace {

// 2^n sum_s (-1)^s (s+n)! x^{2s} / (s! (2s+2n+1)!), i.e. j_n(x)/x^n,
// multiplied by `lead` / (leading coefficient).
double series_from(int n, double x, double lead) {
  double term = lead;
  const double x2 = x * x;
  double sum = term;
  for (int s = 1; s < 500; ++s) {
    term *= -x2 / (2.0 * s * (2.0 * s + 2.0 * n + 1.0));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Leading coefficient 2^n n! / (2n+1)! = 1/(2n+1)!!.
double scaled_series(int n, double x) {
  double lead = 1.0;
  for (int k = 1; k <= 2 * n + 1; k += 2) lead /= k;
  return series_from(n, x, lead);
}

double log_double_factorial_odd(int n) {
  // log((2n+1)!!) = log((2n+1)!) - n log 2 - log(n!)
  return std::lgamma(2.0 * n + 2.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
}

bool use_series(int n, double ax) { return ax < 1.0 || ax * ax < n + 1.5; }

double bessel_nonneg(int n, double x) {
  if (use_series(n, x)) return scaled_series(n, x) * std::pow(x, n);

  const double j0 = std::sin(x) / x;
  if (n == 0) return j0;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  if (n == 1) return j1;

  if (x > n) {
    double prev = j0;
    double cur = j1;
    for (int k = 1; k < n; ++k) {
      const double next = (2.0 * k + 1.0) / x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }

  // Miller: start well above n and recur downward with arbitrary scale.
  const int start = n + 20 + static_cast<int>(std::sqrt(40.0 * n)) + static_cast<int>(x);
  double above = 0.0;
  double cur = 1e-300;
  double result = 0.0;
  double at0 = 0.0;
  double at1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double below = (2.0 * k + 1.0) / x * cur - above;
    above = cur;
    cur = below;
    // Rescale to stay clear of overflow; all stored values are rescaled too.
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      above *= 1e-250;
      result *= 1e-250;
      at1 *= 1e-250;
    }
    if (k - 1 == n) result = cur;
    if (k - 1 == 1) at1 = cur;
  }
  at0 = cur;
  // Normalise against whichever of j0, j1 is better conditioned.
  if (std::abs(j0) >= std::abs(j1)) return result * (j0 / at0);
  return result * (j1 / at1);
}

}  // namespace

double spherical_bessel_j(int n, double x) {
  if (n < 0) throw DomainError("spherical_bessel_j: order must be nonnegative");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double v = bessel_nonneg(n, std::abs(x));
  return (x < 0 && (n % 2 == 1)) ? -v : v;
}

double spherical_bessel_j_scaled(int n, double x) {
  if (n < 0) throw DomainError("spherical_bessel_j_scaled: order must be nonnegative");
  const double ax = std::abs(x);
  if (use_series(n, ax)) return scaled_series(n, ax);
  // j_n(x)/x^n is even in x.
  return bessel_nonneg(n, ax) / std::pow(ax, n);
}

double spherical_bessel_j_normalized(int n, double x) {
  if (n < 0) throw DomainError("spherical_bessel_j_normalized: order must be nonnegative");
  const double ax = std::abs(x);
  if (use_series(n, ax)) return series_from(n, ax, 1.0);
  const double jn = bessel_nonneg(n, ax);
  return jn * std::exp(log_double_factorial_odd(n) - n * std::log(ax));
}

}  // namespace rtn
