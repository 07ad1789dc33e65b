// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/pulse_control.hpp"

#include <cmath>

#include "rtn/analytic.hpp"
#include "rtn/special_functions.hpp"

namespace rtn {

PulseSchedule PulseSchedule::suppression(double t, int n) {
  if (n < 1) throw DomainError("segment count must be >= 1");
  PulseSchedule s;
  for (int k = 0; k < n; ++k) s.segments.push_back({t / n, SegmentKind::drive, k % 2 == 0 ? 1 : -1});
  return s;
}

PulseSchedule PulseSchedule::waiting(double t, int n, double wait) {
  if (n < 1) throw DomainError("segment count must be >= 1");
  PulseSchedule s;
  for (int k = 0; k < n; ++k) {
    if (k > 0) s.segments.push_back({wait, SegmentKind::wait, 1});
    s.segments.push_back({t / n, SegmentKind::drive, 1});
  }
  return s;
}

PulseSchedule PulseSchedule::single(double t) { return {{{t, SegmentKind::drive, 1}}}; }

double PulseSchedule::drive_time() const {
  double total = 0.0;
  for (const auto& s : segments) {
    if (s.kind == SegmentKind::drive) total += s.duration;
  }
  return total;
}

int PulseSchedule::drive_count() const {
  int n = 0;
  for (const auto& s : segments) n += s.kind == SegmentKind::drive ? 1 : 0;
  return n;
}

void PulseSchedule::validate() const {
  for (const auto& s : segments) {
    if (!(std::isfinite(s.duration) && s.duration >= 0)) {
      throw DomainError("segment durations must be finite and >= 0");
    }
    if (s.kind == SegmentKind::drive && s.sign != 1 && s.sign != -1) {
      throw DomainError("drive segment sign must be +1 or -1");
    }
  }
}

double waiting_method_expectation(const TelegraphSource& source, double m, double t, int n,
                                  WaitingMode mode) {
  source.validate();
  if (!source.is_symmetric()) throw DomainError("waiting method assumes tau_plus == tau_minus");
  if (n < 1) throw DomainError("segment count must be >= 1");
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  if (mode == WaitingMode::leading_order) {
    const double md = m * source.delta * t;
    return 1.0 - md * md / (2.0 * n);
  }
  const double piece = cos_expectation_symmetric(source, {m, t / n});
  return std::pow(piece, n);
}

ComplexValue suppression_method_expectation(const TelegraphSource& source, double m, double t,
                                            int n, SuppressionMode mode) {
  source.validate();
  if (!source.is_symmetric()) throw DomainError("suppression method assumes tau_plus == tau_minus");
  if (n < 2 || n % 2 != 0) throw DomainError("suppression method needs an even n >= 2");
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  if (m * source.delta * t == 0.0) return {1.0, 0.0};

  if (mode == SuppressionMode::exact_transfer) {
    return schedule_char_fn(PulseSchedule::suppression(t, n), source, m);
  }
  const EvaluationPoint piece{m, t / n};
  const Complex forward = char_fn_general(source, piece, StartPolicy::positive).as_complex();
  const Complex reversed =
      char_fn_general(source, {-m, t / n}, StartPolicy::positive).as_complex();
  return ComplexValue(std::pow(forward * reversed, n / 2));
}

double sin_expectation_positive_start(const TelegraphSource& source, double m, double t) {
  source.validate();
  if (!source.is_symmetric()) throw DomainError("sin_expectation_positive_start needs tau_plus == tau_minus");
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  const double z = m * source.delta * t;
  if (z == 0.0) return 0.0;
  const double lambda = t / source.tau_plus;
  const double w = lambda * lambda - z * z;
  if (w >= 1.0) {
    const double s = std::sqrt(w);
    const double shift = -z * z / (s + lambda);  // s - lambda
    return z * (std::exp(shift) - std::exp(-s - lambda)) / (2.0 * s);
  }
  return std::exp(-lambda) * z * kernel_sinch_even(w);
}

ComplexValue schedule_char_fn(const PulseSchedule& schedule, const TelegraphSource& source,
                              double m) {
  schedule.validate();
  source.validate();
  if (m * source.delta == 0.0) return {1.0, 0.0};
  Transfer total = Transfer::identity();
  for (const auto& seg : schedule.segments) {
    const double signed_m = seg.kind == SegmentKind::drive ? m * seg.sign : 0.0;
    total = total * segment_transfer(source, signed_m, seg.duration);
  }
  const double pp = source.p_plus;
  const Complex value = pp * (total.pp + total.pn) + (1.0 - pp) * (total.np + total.nn);
  return ComplexValue(value);
}

WaitingMode parse_waiting_mode(const std::string& name) {
  if (name == "exact") return WaitingMode::exact;
  if (name == "leading_order") return WaitingMode::leading_order;
  throw DomainError("unknown waiting mode '" + name + "' (expected exact|leading_order)");
}

SuppressionMode parse_suppression_mode(const std::string& name) {
  if (name == "independent_pairs") return SuppressionMode::independent_pairs;
  if (name == "exact_transfer") return SuppressionMode::exact_transfer;
  throw DomainError("unknown suppression mode '" + name + "' (expected independent_pairs|exact_transfer)");
}

}  // namespace rtn
