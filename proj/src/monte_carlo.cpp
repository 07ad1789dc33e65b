// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>

#include "rtn/stats.hpp"

namespace rtn::mc {

void Settings::validate() const {
  if (n_samples < 2) throw DomainError("n_samples must be >= 2 for a standard error");
  if (workers < 1) throw DomainError("workers must be >= 1");
}

State draw_start(const TelegraphSource& source, StartPolicy start, PhiloxStream& rng) {
  switch (start) {
    case StartPolicy::positive: return State::positive;
    case StartPolicy::negative: return State::negative;
    case StartPolicy::mixed: break;
  }
  return rng.uniform() < source.p_plus ? State::positive : State::negative;
}

TelegraphWalker::TelegraphWalker(const TelegraphSource& source, State start, PhiloxStream& rng)
    : tau_plus_(source.tau_plus),
      tau_minus_(source.tau_minus),
      state_(start),
      residual_(rng.exponential(start == State::positive ? source.tau_plus : source.tau_minus)) {}

double TelegraphWalker::advance(double duration, PhiloxStream& rng, std::vector<double>* flips,
                                double origin) {
  double positive_time = 0.0;
  double elapsed = 0.0;
  while (residual_ < duration - elapsed) {
    if (state_ == State::positive) positive_time += residual_;
    elapsed += residual_;
    if (flips) flips->push_back(origin + elapsed);
    state_ = flipped(state_);
    ++flips_;
    residual_ = rng.exponential(state_ == State::positive ? tau_plus_ : tau_minus_);
  }
  const double rest = duration - elapsed;
  if (state_ == State::positive) positive_time += rest;
  residual_ -= rest;
  return std::clamp(positive_time, 0.0, duration);
}

namespace {

// Signed integral of Y / delta over a segment given time spent positive.
inline double signed_excursion(double positive_time, double duration) {
  return 2.0 * positive_time - duration;
}

std::int64_t block_size(std::int64_t n, int workers, int w) {
  return n / workers + (w < n % workers ? 1 : 0);
}

// Runs body(rng, acc) once per sample of every block, then
// merges the per-block accumulators in block order.
template <typename Acc, typename Body>
Acc run_blocks(const Settings& s, Acc init, Body body) {
  s.validate();
  std::vector<Acc> partial(static_cast<std::size_t>(s.workers), init);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto run_block = [&](int w) {
    try {
      PhiloxStream rng(s.seed, static_cast<std::uint64_t>(w));
      Acc& acc = partial[static_cast<std::size_t>(w)];
      const std::int64_t count = block_size(s.n_samples, s.workers, w);
      for (std::int64_t i = 0; i < count; ++i) body(rng, acc);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (s.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int w = 0; w < s.workers; ++w) run_block(w);
  } else {
    for (int w = 0; w < s.workers; ++w) run_block(w);
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = init;
  for (const Acc& p : partial) total.merge(p);
  return total;
}

struct ComplexAcc {
  RunningStats re;
  RunningStats im;
  void merge(const ComplexAcc& o) {
    re.merge(o.re);
    im.merge(o.im);
  }
  void add_phase(double phase) {
    re.add(std::cos(phase));
    im.add(std::sin(phase));
  }
};

struct RealAcc {
  RunningStats stats;
  void merge(const RealAcc& o) { stats.merge(o.stats); }
};

ComplexEstimate to_estimate(const ComplexAcc& a, const Settings& s) {
  return {ComplexValue(a.re.mean, a.im.mean), a.re.std_error(), a.im.std_error(), a.re.n, s.seed};
}

RealEstimate to_estimate(const RealAcc& a, const Settings& s) {
  return {a.stats.mean, a.stats.std_error(), a.stats.n, s.seed};
}

// theta at time t for one fresh path; also reports the flip count.
inline double draw_theta(const TelegraphSource& source, double t, StartPolicy start,
                         PhiloxStream& rng, int* flips = nullptr) {
  TelegraphWalker walker(source, draw_start(source, start, rng), rng);
  const double pos = walker.advance(t, rng);
  if (flips) *flips = walker.flip_count();
  return source.delta * signed_excursion(pos, t);
}

}  // namespace

PathSample sample_path(const TelegraphSource& source, double t, PhiloxStream& rng,
                       StartPolicy start) {
  source.validate();
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  PathSample path;
  path.start_state = draw_start(source, start, rng);
  TelegraphWalker walker(source, path.start_state, rng);
  const double pos = walker.advance(t, rng, &path.flip_times);
  path.flip_count = walker.flip_count();
  path.end_state = walker.state();
  path.theta_final = source.delta * signed_excursion(pos, t);
  return path;
}

ComplexEstimate estimate_char_fn(const TelegraphSource& source, const EvaluationPoint& point,
                                 StartPolicy start, const Settings& settings) {
  source.validate();
  point.validate();
  const auto acc = run_blocks(settings, ComplexAcc{}, [&](PhiloxStream& rng, ComplexAcc& a) {
    a.add_phase(point.m * draw_theta(source, point.t, start, rng));
  });
  return to_estimate(acc, settings);
}

ComplexEstimate estimate_multi_char_fn(std::span<const TelegraphSource> sources,
                                       const EvaluationPoint& point, const Settings& settings) {
  for (const auto& s : sources) s.validate();
  point.validate();
  const auto acc = run_blocks(settings, ComplexAcc{}, [&](PhiloxStream& rng, ComplexAcc& a) {
    double theta = 0.0;
    for (const auto& s : sources) theta += draw_theta(s, point.t, StartPolicy::mixed, rng);
    a.add_phase(point.m * theta);
  });
  return to_estimate(acc, settings);
}

RealEstimate estimate_theta_moment(const TelegraphSource& source, double t, int k,
                                   StartPolicy start, const Settings& settings) {
  source.validate();
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  if (k < 0) throw DomainError("moment order must be >= 0");
  const auto acc = run_blocks(settings, RealAcc{}, [&](PhiloxStream& rng, RealAcc& a) {
    a.stats.add(std::pow(draw_theta(source, t, start, rng), k));
  });
  return to_estimate(acc, settings);
}

RealEstimate estimate_conditional(const TelegraphSource& source, double t, int flips,
                                  const std::function<double(double)>& target,
                                  StartPolicy start, const Settings& settings) {
  source.validate();
  if (!(t >= 0)) throw DomainError("t must be >= 0");
  if (flips < 0) throw DomainError("flip count must be >= 0");
  constexpr double kMinProbability = 1e-6;
  if (source.is_symmetric() && poisson_pmf(t / source.tau_plus, flips) < kMinProbability) {
    throw InfeasibleSampling("P(" + std::to_string(flips) +
                             " flips) < 1e-6; rejection sampling is infeasible, use quadrature "
                             "of the flip-conditioned density instead");
  }
  // Attempts allowed per accepted sample before giving up.
  constexpr std::int64_t kAttemptsPerAccept = 50'000'000;

  const auto acc = run_blocks(settings, RealAcc{}, [&](PhiloxStream& rng, RealAcc& a) {
    for (std::int64_t attempt = 0; attempt < kAttemptsPerAccept; ++attempt) {
      int f = 0;
      const double theta = draw_theta(source, t, start, rng, &f);
      if (f == flips) {
        a.stats.add(target(theta));
        return;
      }
    }
    throw InfeasibleSampling("rejection budget exhausted for flip count " +
                             std::to_string(flips));
  });
  return to_estimate(acc, settings);
}

ComplexEstimate estimate_schedule(const PulseSchedule& schedule, const TelegraphSource& source,
                                  double m, const Settings& settings) {
  schedule.validate();
  source.validate();
  const auto acc = run_blocks(settings, ComplexAcc{}, [&](PhiloxStream& rng, ComplexAcc& a) {
    TelegraphWalker walker(source, draw_start(source, StartPolicy::mixed, rng), rng);
    double excursion = 0.0;
    for (const Segment& seg : schedule.segments) {
      const double pos = walker.advance(seg.duration, rng);
      if (seg.kind == SegmentKind::drive) excursion += seg.sign * signed_excursion(pos, seg.duration);
    }
    a.add_phase(m * source.delta * excursion);
  });
  return to_estimate(acc, settings);
}

RealEstimate estimate_ensemble_variance(const OneOverFEnsemble& ensemble, double t,
                                        const Settings& settings) {
  ensemble.validate();
  if (!(t > 0)) throw DomainError("t must be > 0");
  const double log_w = std::log(ensemble.tau_a / ensemble.tau_b);
  const auto acc = run_blocks(settings, RealAcc{}, [&](PhiloxStream& rng, RealAcc& a) {
    double theta = 0.0;
    for (int i = 0; i < ensemble.r; ++i) {
      double tau;
      if (ensemble.alpha) {
        // Inverse CDF of (alpha-1) tau^(alpha-2) / tau_b^(alpha-1) on (0, tau_b].
        tau = ensemble.tau_b * std::pow(rng.uniform_open_closed(), 1.0 / (*ensemble.alpha - 1.0));
      } else {
        tau = ensemble.tau_b * std::exp(log_w * rng.uniform());
      }
      const double delta = std::abs(ensemble.delta_mean + ensemble.delta_sd * rng.normal());
      theta += draw_theta(TelegraphSource::symmetric(delta, tau), t, StartPolicy::mixed, rng);
    }
    a.stats.add(theta * theta);
  });
  return to_estimate(acc, settings);
}

namespace {

struct HistAcc {
  std::vector<std::int64_t> counts;
  std::int64_t plus = 0;
  std::int64_t minus = 0;
  std::int64_t total = 0;
  void merge(const HistAcc& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    plus += o.plus;
    minus += o.minus;
    total += o.total;
  }
};

RealEstimate proportion(std::int64_t k, std::int64_t n, std::uint64_t seed) {
  const double p = static_cast<double>(k) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

}  // namespace

Histogram estimate_histogram(const TelegraphSource& source, double t, StartPolicy start,
                             int n_bins, const Settings& settings) {
  source.validate();
  if (!(t > 0)) throw DomainError("t must be > 0");
  if (n_bins < 1) throw DomainError("n_bins must be >= 1");
  const double theta_c = source.delta * t;
  if (!(theta_c > 0)) throw DomainError("theta_c must be > 0");

  HistAcc init;
  init.counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = 2.0 * theta_c / n_bins;
  const auto acc = run_blocks(settings, init, [&](PhiloxStream& rng, HistAcc& a) {
    int f = 0;
    const double theta = draw_theta(source, t, start, rng, &f);
    ++a.total;
    if (f == 0) {
      (theta > 0 ? a.plus : a.minus) += 1;
      return;
    }
    const auto bin = std::clamp(static_cast<int>((theta + theta_c) / width), 0, n_bins - 1);
    ++a.counts[static_cast<std::size_t>(bin)];
  });

  Histogram h;
  h.theta_c = theta_c;
  for (int i = 0; i <= n_bins; ++i) h.edges.push_back(-theta_c + i * width);
  for (int i = 0; i < n_bins; ++i) {
    const auto p = proportion(acc.counts[static_cast<std::size_t>(i)], acc.total, settings.seed);
    h.density.push_back(p.mean / width);
    h.density_se.push_back(p.std_error / width);
  }
  h.atom_plus = proportion(acc.plus, acc.total, settings.seed);
  h.atom_minus = proportion(acc.minus, acc.total, settings.seed);
  return h;
}

}  // namespace rtn::mc
