// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace rtn {

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double total = na + nb;
    mean += d * nb / total;
    m2 += o.m2 + d * d * na * nb / total;
    n += o.n;
  }

  /// Unbiased sample variance; 0 with fewer than two samples.
  [[nodiscard]] double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  [[nodiscard]] double std_error() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

}  // namespace rtn
