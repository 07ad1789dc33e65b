// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "rtn/types.hpp"

namespace rtn {

/// Below this |x2| the even kernels switch to their Taylor series.
inline constexpr double kKernelTaylorThreshold = 1e-4;

/// cosh(sqrt(x2)) for x2 >= 0, cos(sqrt(-x2)) for x2 < 0.
double kernel_cosh_even(double x2);

/// sinh(sqrt(x2))/sqrt(x2) for x2 > 0, sin(sqrt(-x2))/sqrt(-x2) for x2 < 0, 1 at 0.
double kernel_sinch_even(double x2);

/// Complex continuations of the even kernels; entire in w, so the branch of
/// sqrt(w) never matters.
Complex kernel_cosh_even(Complex w);
Complex kernel_sinch_even(Complex w);

/// Spherical Bessel function of the first kind j_n(x).
///
/// Small arguments use the power series, x > n uses upward recurrence, and the
/// remaining region uses Miller's downward recurrence normalised against j_0
/// or j_1.
double spherical_bessel_j(int n, double x);

/// j_n(x) / x^n, finite at x = 0 where it equals 1/(2n+1)!!.
double spherical_bessel_j_scaled(int n, double x);

/// (2n+1)!! j_n(x) / x^n, equal to 1 at x = 0. Stays representable for
/// orders where the double factorial alone would overflow.
double spherical_bessel_j_normalized(int n, double x);

/// Carlitz Bessel polynomials p_n, defined by
///   sum_k p_k(x) t^k / k! = exp(x (1 - sqrt(1 - 2t))).
///
/// Coefficients are produced once by exact rational expansion of the
/// generating function and cached as doubles.
class CarlitzTable {
 public:
  static constexpr int kDefaultMaxOrder = 64;

  explicit CarlitzTable(int max_order = kDefaultMaxOrder);

  [[nodiscard]] int max_order() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficients of p_n in increasing powers of x.
  [[nodiscard]] const std::vector<double>& coefficients(int n) const;

  [[nodiscard]] double eval(int n, double x) const;
  [[nodiscard]] Complex eval(int n, Complex x) const;
  /// d/dx p_n(x).
  [[nodiscard]] double derivative(int n, double x) const;

  /// Shared table at the default order.
  static const CarlitzTable& instance();

 private:
  std::vector<std::vector<double>> coeffs_;
};

/// p_n(x) from the shared table; throws DomainError past the table order.
double carlitz_bessel_p(int n, double x);
Complex carlitz_bessel_p(int n, Complex x);

}  // namespace rtn
