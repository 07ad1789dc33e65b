// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/qubit_dephasing.hpp"

#include <cmath>

#include "rtn/analytic.hpp"
#include "rtn/pulse_control.hpp"

namespace rtn {

PauliZErrorProbs probs_from_fourier(double e1, double e_cos2, double e_cos4) {
  if (e1 != 1.0) throw DomainError("E[1] must equal 1");
  if (!(std::abs(e_cos2) <= 1.0) || !(std::abs(e_cos4) <= 1.0)) {
    throw DomainError("E[cos 2 theta] and E[cos 4 theta] must lie in [-1, 1]");
  }
  return {3.0 / 8 * e1 + 0.5 * e_cos2 + 1.0 / 8 * e_cos4,
          1.0 / 8 * e1 - 1.0 / 8 * e_cos4,
          3.0 / 8 * e1 - 0.5 * e_cos2 + 1.0 / 8 * e_cos4};
}

PauliZErrorProbs probs_rtn(const TelegraphSource& source, double t) {
  return probs_from_fourier(1.0, cos_expectation_symmetric(source, {2.0, t}),
                            cos_expectation_symmetric(source, {4.0, t}));
}

PauliZErrorProbs probs_rtn_suppressed(const TelegraphSource& source, double t, int n) {
  const auto e2 = suppression_method_expectation(source, 2.0, t, n, SuppressionMode::exact_transfer);
  const auto e4 = suppression_method_expectation(source, 4.0, t, n, SuppressionMode::exact_transfer);
  return probs_from_fourier(1.0, e2.re, e4.re);
}

PauliZErrorProbs probs_gaussian(double sigma) {
  if (!(sigma >= 0)) throw DomainError("sigma must be >= 0");
  // r - 1 and r^4 - 1 via expm1 so small sigma keeps full relative accuracy.
  const double s2 = sigma * sigma;
  const double r_m1 = std::expm1(-2.0 * s2);
  const double r4_m1 = std::expm1(-8.0 * s2);
  return {1.0 + 0.5 * r_m1 + r4_m1 / 8.0, -r4_m1 / 8.0, -0.5 * r_m1 + r4_m1 / 8.0};
}

PauliZErrorProbs probs_gaussian_quartic(double sigma) {
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  return {1.0 - 2.0 * s2 + 5.0 * s4, s2 - 4.0 * s4, 3.0 * s4};
}

}  // namespace rtn
