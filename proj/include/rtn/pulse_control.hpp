// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rtn/schedule.hpp"
#include "rtn/types.hpp"

namespace rtn {

enum class WaitingMode { exact, leading_order };
enum class SuppressionMode { independent_pairs, exact_transfer };

/// E[cos(m theta)] when the drive of length t is split into n equal pieces,
/// each preceded by a wait long enough to re-randomise the source.
///
/// exact: the single-piece symmetric closed form raised to the n-th power.
/// leading_order: 1 - m^2 delta^2 t^2 / (2n).
double waiting_method_expectation(const TelegraphSource& source, double m, double t, int n,
                                  WaitingMode mode);

/// E[exp(i m theta)] for n contiguous pieces of t/n with the noise sign
/// reversed between pieces. n must be even.
///
/// independent_pairs treats each piece as a fresh positive start and multiplies
/// E_+(m) E_+(-m) per pair. exact_transfer composes the state-resolved
/// propagators, keeping the correlation between adjacent pieces, with the
/// initial state drawn from source.p_plus.
ComplexValue suppression_method_expectation(const TelegraphSource& source, double m, double t,
                                            int n, SuppressionMode mode);

/// E[sin(m theta)] for a symmetric source that starts in the positive state.
double sin_expectation_positive_start(const TelegraphSource& source, double m, double t);

/// Exact E[exp(i m theta_total)] along an arbitrary schedule: product of
/// segment propagators (m = 0 for waits), start drawn from source.p_plus.
ComplexValue schedule_char_fn(const PulseSchedule& schedule, const TelegraphSource& source,
                              double m);

WaitingMode parse_waiting_mode(const std::string& name);
SuppressionMode parse_suppression_mode(const std::string& name);

}  // namespace rtn
