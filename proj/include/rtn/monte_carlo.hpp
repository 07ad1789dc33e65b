// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Event-driven telegraph path sampler and the estimators built on it.
//
// Every estimator splits its samples into `workers` contiguous blocks. Block w
// draws from PhiloxStream(seed, w) and keeps its own Welford accumulator; the
// blocks are merged in index order. The result therefore depends only on
// (seed, n_samples, workers), never on how many OpenMP threads ran the blocks
// or in which order they finished. Execution::serial runs the same blocks in
// a plain loop and is the reference the parallel kernels are tested against.

#include <cstdint>
#include <functional>
#include <vector>

#include "rtn/analytic.hpp"
#include "rtn/rng.hpp"
#include "rtn/schedule.hpp"
#include "rtn/types.hpp"

namespace rtn::mc {

enum class Execution { serial, parallel };

inline constexpr int kDefaultWorkers = 16;

struct Settings {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 1;
  int workers = kDefaultWorkers;
  Execution execution = Execution::parallel;

  void validate() const;
};

/// Rejection sampling cannot reach the requested flip count in reasonable time.
class InfeasibleSampling : public DomainError {
 public:
  using DomainError::DomainError;
};

struct PathSample {
  std::vector<double> flip_times;
  double theta_final = 0.0;
  int flip_count = 0;
  State start_state = State::positive;
  State end_state = State::positive;
};

/// Draws the initial state for a policy.
State draw_start(const TelegraphSource& source, StartPolicy start, PhiloxStream& rng);

/// Continuous-time walk of one source: the current state plus the time left
/// until its next flip. Memoryless dwell times make the residual exact.
class TelegraphWalker {
 public:
  TelegraphWalker(const TelegraphSource& source, State start, PhiloxStream& rng);

  /// Evolves for `duration` and returns the time spent in the positive state.
  /// Flip times (offset by `origin`) are appended when `flips` is non-null.
  double advance(double duration, PhiloxStream& rng, std::vector<double>* flips = nullptr,
                 double origin = 0.0);

  [[nodiscard]] State state() const { return state_; }
  [[nodiscard]] int flip_count() const { return flips_; }

 private:
  double tau_plus_;
  double tau_minus_;
  State state_;
  double residual_;
  int flips_ = 0;
};

/// One exact trajectory on [0, t] with every flip time recorded.
PathSample sample_path(const TelegraphSource& source, double t, PhiloxStream& rng,
                       StartPolicy start = StartPolicy::mixed);

struct RealEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct ComplexEstimate {
  ComplexValue mean;
  double se_re = 0.0;
  double se_im = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Sample mean of exp(i m theta).
ComplexEstimate estimate_char_fn(const TelegraphSource& source, const EvaluationPoint& point,
                                 StartPolicy start, const Settings& settings);

/// Sample mean of exp(i m theta_total) for independent sources (each with a
/// mixed start from its p_plus).
ComplexEstimate estimate_multi_char_fn(std::span<const TelegraphSource> sources,
                                       const EvaluationPoint& point, const Settings& settings);

/// Sample mean of theta^k at time t.
RealEstimate estimate_theta_moment(const TelegraphSource& source, double t, int k,
                                   StartPolicy start, const Settings& settings);

/// Mean of target(theta) over paths with exactly `flips` flips, by rejection.
/// settings.n_samples counts accepted paths. Throws InfeasibleSampling when
/// the flip count has probability below 1e-6 (symmetric sources) or when the
/// attempt budget runs out.
RealEstimate estimate_conditional(const TelegraphSource& source, double t, int flips,
                                  const std::function<double(double)>& target,
                                  StartPolicy start, const Settings& settings);

/// Sample mean of exp(i m theta_total) along a schedule, carrying the source
/// state through every segment. Start drawn from source.p_plus.
ComplexEstimate estimate_schedule(const PulseSchedule& schedule, const TelegraphSource& source,
                                  double m, const Settings& settings);

/// E[theta_total^2] for an ensemble: each realization draws r sources with
/// dwell times from the ensemble density and amplitudes |N(delta_mean, delta_sd)|.
RealEstimate estimate_ensemble_variance(const OneOverFEnsemble& ensemble, double t,
                                        const Settings& settings);

struct Histogram {
  double theta_c = 0.0;
  std::vector<double> edges;       // n_bins + 1 edges over [-theta_c, theta_c]
  std::vector<double> density;     // estimated continuous density per bin
  std::vector<double> density_se;  // binomial standard error per bin
  RealEstimate atom_plus;          // P(theta = +theta_c)
  RealEstimate atom_minus;         // P(theta = -theta_c)
};

/// Histogram of theta split into the no-flip atoms and the f >= 1 density.
Histogram estimate_histogram(const TelegraphSource& source, double t, StartPolicy start,
                             int n_bins, const Settings& settings);

}  // namespace rtn::mc
