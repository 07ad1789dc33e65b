// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rtn {

/// Philox4x32-10 block function (Salmon et al., SC'11).
///
/// Pure function of (counter, key); used through PhiloxStream.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Counter-based random stream keyed by (seed, stream id).
///
/// Streams with different ids never overlap: the id occupies the upper half
/// of the Philox counter, the draw index the lower half.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (cursor_ == 2) refill();
    return buffer_[cursor_++];
  }

  /// Uniform on (0, 1] with 53 random bits.
  double uniform_open_closed() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -std::log(uniform_open_closed()) * mean; }

  /// Standard normal via Box-Muller; the second variate is discarded so the
  /// stream position stays a simple function of the number of calls.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open_closed()));
    return r * std::cos(2.0 * M_PI * uniform());
  }

  [[nodiscard]] std::uint64_t blocks_used() const { return counter_; }

 private:
  void refill() {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = philox4x32_10(ctr, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++counter_;
    cursor_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int cursor_ = 2;
};

}  // namespace rtn
