// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rtn/types.hpp"

namespace rtn {

/// Pauli-Z error probabilities of exp(i theta (Z x I + I x Z)).
///
/// n0: no error; n1: Z on one given qubit (two such patterns);
/// n2: Z on both. n0 + 2 n1 + n2 = 1.
struct PauliZErrorProbs {
  double n0 = 1.0;
  double n1 = 0.0;
  double n2 = 0.0;

  [[nodiscard]] double completeness() const { return n0 + 2.0 * n1 + n2; }
};

/// [n0; n1; n2] = M [E[1]; E[cos 2 theta]; E[cos 4 theta]] with
/// M = [3/8 1/2 1/8; 1/8 0 -1/8; 3/8 -1/2 1/8].
/// Throws DomainError unless e1 == 1 and the cosines lie in [-1, 1].
PauliZErrorProbs probs_from_fourier(double e1, double e_cos2, double e_cos4);

/// Symmetric telegraph noise over a drive of length t.
PauliZErrorProbs probs_rtn(const TelegraphSource& source, double t);

/// Symmetric telegraph noise under the sign-reversal schedule with n pieces
/// (exact propagator composition), as produced by the gate R = X x X which
/// commutes with the drive and anticommutes with Z x I + I x Z.
PauliZErrorProbs probs_rtn_suppressed(const TelegraphSource& source, double t, int n);

/// Gaussian theta with standard deviation sigma; r = exp(-2 sigma^2).
PauliZErrorProbs probs_gaussian(double sigma);

/// Quartic expansion n0 ~ 1 - 2 s^2 + 5 s^4, n1 ~ s^2 - 4 s^4, n2 ~ 3 s^4.
PauliZErrorProbs probs_gaussian_quartic(double sigma);

}  // namespace rtn
