// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace rtn {

enum class SegmentKind { drive, wait };

struct Segment {
  double duration = 0.0;
  SegmentKind kind = SegmentKind::drive;
  int sign = 1;  // +1 or -1; drive segments only
};

/// Ordered drive/wait segments. A drive segment with sign -1 accumulates
/// -integral(Y dt), which is what conjugating the noise by an anticommuting
/// gate does. Wait segments let the source evolve without accumulating.
struct PulseSchedule {
  std::vector<Segment> segments;

  /// n drive segments of t/n with alternating signs, starting positive.
  static PulseSchedule suppression(double t, int n);
  /// n positive drive segments of t/n separated by waits of `wait`.
  static PulseSchedule waiting(double t, int n, double wait);
  /// A single drive of length t.
  static PulseSchedule single(double t);

  [[nodiscard]] double drive_time() const;
  [[nodiscard]] int drive_count() const;
  /// Throws DomainError for negative durations or signs other than +-1.
  void validate() const;
};

}  // namespace rtn
