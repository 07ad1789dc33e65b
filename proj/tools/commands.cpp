// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "cli.hpp"
#include "rtn/analytic.hpp"
#include "rtn/pulse_control.hpp"
#include "rtn/qubit_dephasing.hpp"

namespace rtnoise {

using rtn::Cell;
using rtn::Table;
using rtn::TelegraphSource;
using Row = std::vector<Cell>;

rtn::mc::Settings CommonOptions::mc_settings() const {
  rtn::mc::Settings s;
  s.n_samples = samples;
  s.seed = seed;
  s.workers = workers;
  s.validate();
  return s;
}

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--out", opts.out, "Write the table to PATH instead of stdout");
  cmd.add_option("--seed", opts.seed, "Monte Carlo seed")->capture_default_str();
  cmd.add_option("--samples", opts.samples, "Monte Carlo samples per row")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--workers", opts.workers, "Independent random streams per estimate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

TelegraphSource SourceOptions::source() const {
  TelegraphSource s{delta, tau_plus > 0 ? tau_plus : tau, tau_minus > 0 ? tau_minus : tau, p_plus};
  s.validate();
  return s;
}

void add_source_options(CLI::App& cmd, SourceOptions& opts, bool asymmetric) {
  cmd.add_option("--delta", opts.delta, "Noise amplitude")->capture_default_str();
  cmd.add_option("--tau", opts.tau, "Mean dwell time of both states")->capture_default_str();
  if (asymmetric) {
    cmd.add_option("--tau-plus", opts.tau_plus, "Mean dwell time in the positive state");
    cmd.add_option("--tau-minus", opts.tau_minus, "Mean dwell time in the negative state");
    cmd.add_option("--p-plus", opts.p_plus, "Probability of starting positive")->capture_default_str();
  }
}

void emit(const Table& table, const CommonOptions& opts) {
  const auto format = rtn::parse_table_format(opts.format);
  const std::string text = table.to_string(format);
  if (opts.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + opts.out + " for writing");
  file << text;
  if (!file.flush()) throw std::runtime_error("write to " + opts.out + " failed");
}

std::string params_hash(const std::vector<std::pair<std::string, std::string>>& params) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : params) {
    feed(k);
    feed("=");
    feed(v);
    feed(";");
  }
  return fmt::format("{:016x}", h);
}

std::string num(double x) { return rtn::format_number(x); }

std::vector<Row> evaluate_rows(std::size_t n, const std::function<Row(std::size_t)>& row) {
  std::vector<Row> rows(n);
  if (n == 1) {
    rows[0] = row(0);
    return rows;
  }
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      rows[i] = row(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t i) { return seed + 0x9E3779B97F4A7C15ull * i; }

namespace {

Table make_table(std::vector<std::string> columns, std::vector<Row> rows) {
  Table t;
  t.columns = std::move(columns);
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double z_score(double diff, double se) {
  if (diff == 0.0) return 0.0;
  if (se == 0.0) return std::numeric_limits<double>::max();
  return std::abs(diff) / se;
}

std::vector<std::pair<double, double>> grid(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::pair<double, double>> g;
  for (double x : a) {
    for (double y : b) g.emplace_back(x, y);
  }
  return g;
}

// ---------------------------------------------------------------------------
// expect
// ---------------------------------------------------------------------------

struct ExpectOptions {
  CommonOptions common;
  SourceOptions source;
  std::vector<double> m{1.0};
  std::vector<double> t{1.0};
  std::vector<double> sigma{1.0};
  std::string start = "mixed";
  std::string regime = "gaussian_limit";
  std::vector<std::string> sources;
  bool mc = false;
  // one-over-f
  int r = 1;
  double tau_a = 10.0;
  double tau_b = 0.1;
  double delta_mean = 1.0;
  double delta_sd = 0.0;
  std::optional<double> alpha;
};

TelegraphSource parse_source_spec(const std::string& spec) {
  std::vector<double> v;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--source '" + spec + "': '" + item + "' is not a number");
    }
  }
  if (v.size() != 3 && v.size() != 4) {
    throw UsageError("--source '" + spec + "': expected delta:tau_plus:tau_minus[:p_plus]");
  }
  TelegraphSource s{v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.5};
  s.validate();
  return s;
}

int run_expect_symmetric(const ExpectOptions& o) {
  const auto src = rtn::TelegraphSource::symmetric(o.source.delta, o.source.tau);
  src.validate();
  const auto g = grid(o.m, o.t);
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;
  auto rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const auto [m, t] = g[i];
    Row row{std::string("cos_symmetric"), m, t, src.delta, src.tau_plus,
            rtn::cos_expectation_symmetric(src, {m, t})};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_char_fn(src, {m, t}, rtn::StartPolicy::mixed, s);
      row.insert(row.end(), {est.mean.re, est.se_re});
    }
    row.emplace_back(params_hash({{"m", num(m)}, {"t", num(t)}, {"delta", num(src.delta)},
                                  {"tau_c", num(src.tau_plus)}}));
    return row;
  });
  std::vector<std::string> cols{"formula", "m", "t", "delta", "tau_c", "value"};
  if (o.mc) cols = concat(cols, {"mc_mean", "mc_se"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

int run_expect_general(const ExpectOptions& o) {
  const auto src = o.source.source();
  const auto start = rtn::parse_start_policy(o.start);
  const auto g = grid(o.m, o.t);
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;
  auto rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const auto [m, t] = g[i];
    const auto v = rtn::char_fn_general(src, {m, t}, start);
    Row row{std::string("char_fn_general"), m, t, src.delta, src.tau_plus, src.tau_minus, src.p_plus,
            rtn::to_string(start), v.re, v.im};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_char_fn(src, {m, t}, start, s);
      row.insert(row.end(), {est.mean.re, est.mean.im, est.se_re, est.se_im});
    }
    row.emplace_back(params_hash({{"m", num(m)}, {"t", num(t)}, {"delta", num(src.delta)},
                                  {"tau_plus", num(src.tau_plus)}, {"tau_minus", num(src.tau_minus)},
                                  {"p_plus", num(src.p_plus)}, {"start", rtn::to_string(start)}}));
    return row;
  });
  std::vector<std::string> cols{"formula", "m",      "t",     "delta",    "tau_plus",
                                "tau_minus", "p_plus", "start", "value_re", "value_im"};
  if (o.mc) cols = concat(cols, {"mc_re", "mc_im", "se_re", "se_im"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

int run_expect_gaussian(const ExpectOptions& o) {
  const auto g = grid(o.m, o.sigma);
  auto rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const auto [m, sigma] = g[i];
    if (!(sigma >= 0)) throw UsageError("--sigma must be >= 0");
    return Row{std::string("gaussian_cos"), m, sigma, rtn::gaussian_cos_expectation(m, sigma),
               params_hash({{"m", num(m)}, {"sigma", num(sigma)}})};
  });
  emit(make_table({"formula", "m", "sigma", "value", "params_hash"}, std::move(rows)), o.common);
  return kOk;
}

int run_expect_multi(const ExpectOptions& o) {
  if (o.sources.empty()) throw UsageError("multi-source needs at least one --source");
  std::vector<TelegraphSource> srcs;
  for (const auto& s : o.sources) srcs.push_back(parse_source_spec(s));
  std::string joined;
  for (const auto& s : o.sources) joined += (joined.empty() ? "" : ";") + s;
  const auto g = grid(o.m, o.t);
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;
  auto rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const auto [m, t] = g[i];
    const auto v = rtn::multi_source_char_fn(srcs, {m, t});
    Row row{std::string("multi_source_char_fn"), m, t, joined, v.re, v.im};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_multi_char_fn(srcs, {m, t}, s);
      row.insert(row.end(), {est.mean.re, est.mean.im, est.se_re, est.se_im});
    }
    row.emplace_back(params_hash({{"m", num(m)}, {"t", num(t)}, {"sources", joined}}));
    return row;
  });
  std::vector<std::string> cols{"formula", "m", "t", "sources", "value_re", "value_im"};
  if (o.mc) cols = concat(cols, {"mc_re", "mc_im", "se_re", "se_im"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

int run_expect_approximation(const ExpectOptions& o) {
  const auto src = rtn::TelegraphSource::symmetric(o.source.delta, o.source.tau);
  src.validate();
  const auto regime = rtn::parse_approx_regime(o.regime);
  const auto g = grid(o.m, o.t);
  auto rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const auto [m, t] = g[i];
    const double approx = rtn::approx_cos_expectation(src, {m, t}, regime);
    const double exact = rtn::cos_expectation_symmetric(src, {m, t});
    return Row{"approx_" + o.regime, m, t, src.delta, src.tau_plus, approx, exact,
               std::abs(approx - exact),
               params_hash({{"regime", o.regime}, {"m", num(m)}, {"t", num(t)},
                            {"delta", num(src.delta)}, {"tau_c", num(src.tau_plus)}})};
  });
  emit(make_table({"formula", "m", "t", "delta", "tau_c", "value", "exact", "abs_error", "params_hash"},
                  std::move(rows)),
       o.common);
  return kOk;
}

int run_expect_variance(const ExpectOptions& o) {
  const auto src = rtn::TelegraphSource::symmetric(o.source.delta, o.source.tau);
  src.validate();
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;
  auto rows = evaluate_rows(o.t.size(), [&](std::size_t i) {
    const double t = o.t[i];
    const double d2 = src.delta * src.delta, tau = src.tau_plus;
    Row row{std::string("variance_symmetric"), t, src.delta, tau, rtn::variance_symmetric(src, t),
            d2 * t * t, d2 * (t * tau - tau * tau / 2)};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_theta_moment(src, t, 2, rtn::StartPolicy::mixed, s);
      row.insert(row.end(), {est.mean, est.std_error});
    }
    row.emplace_back(params_hash({{"t", num(t)}, {"delta", num(src.delta)}, {"tau_c", num(tau)}}));
    return row;
  });
  std::vector<std::string> cols{"formula", "t", "delta", "tau_c", "variance", "short_time", "long_time"};
  if (o.mc) cols = concat(cols, {"mc_mean", "mc_se"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

int run_expect_one_over_f(const ExpectOptions& o) {
  const rtn::OneOverFEnsemble e{o.r, o.tau_a, o.tau_b, o.delta_mean, o.delta_sd, o.alpha};
  e.validate();
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;
  auto rows = evaluate_rows(o.t.size(), [&](std::size_t i) {
    const double t = o.t[i];
    const double approx = rtn::variance_one_over_f(e, t, rtn::OneOverFMode::approx);
    const double quad = rtn::variance_one_over_f(e, t, rtn::OneOverFMode::quadrature);
    Row row{std::string("variance_one_over_f"), t, approx, quad, (approx - quad) / quad,
            std::string(rtn::one_over_f_approx_questionable(e, t) ? "yes" : "no")};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_ensemble_variance(e, t, s);
      row.insert(row.end(), {est.mean, est.std_error});
    }
    row.emplace_back(params_hash({{"r", std::to_string(e.r)}, {"tau_a", num(e.tau_a)},
                                  {"tau_b", num(e.tau_b)}, {"delta_mean", num(e.delta_mean)},
                                  {"delta_sd", num(e.delta_sd)},
                                  {"alpha", e.alpha ? num(*e.alpha) : std::string("none")},
                                  {"t", num(t)}}));
    return row;
  });
  std::vector<std::string> cols{"formula", "t", "approx", "quadrature", "rel_gap", "approx_questionable"};
  if (o.mc) cols = concat(cols, {"mc_mean", "mc_se"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
  CommonOptions common;
  std::vector<std::string> grids{"symmetric", "general", "schedule", "conditional"};
  std::vector<int> flips{1, 2, 3};
};

struct VerifyCase {
  std::string grid;
  std::string label;
  TelegraphSource source;
  rtn::StartPolicy start = rtn::StartPolicy::mixed;
  double m = 0.0;
  double t = 1.0;
  std::optional<rtn::PulseSchedule> schedule;
  int flips = -1;
};

std::vector<VerifyCase> verify_cases(const VerifyOptions& o) {
  std::vector<VerifyCase> cases;
  for (const auto& g : o.grids) {
    if (g == "symmetric") {
      // (lambda, m delta tau_c) with delta = tau_c = 1, so t = lambda and m = m delta tau_c.
      for (auto [lambda, z] : {std::pair{0.1, 0.1}, {0.1, 3.0}, {1.0, 1.0}, {10.0, 0.1}, {10.0, 3.0},
                               {1.0, 0.0}}) {
        cases.push_back({g, fmt::format("lambda={} m*delta*tau={}", lambda, z),
                         TelegraphSource::symmetric(1.0, 1.0), rtn::StartPolicy::mixed, z, lambda,
                         std::nullopt, -1});
      }
    } else if (g == "general") {
      using P = rtn::StartPolicy;
      const struct {
        double delta, tau_plus, tau_minus, p_plus;
        P start;
        double m, t;
      } pts[] = {{1.0, 1.0, 0.25, 0.5, P::positive, 1.0, 1.0},
                 {1.0, 1.0, 0.25, 0.3, P::mixed, 2.0, 2.0},
                 {1.0, 0.25, 1.0, 0.5, P::positive, 0.5, 3.0},
                 {1.0, 0.25, 1.0, 0.7, P::mixed, 3.0, 0.5},
                 {0.7, 0.5, 2.0, 0.5, P::positive, 1.5, 1.5}};
      for (const auto& p : pts) {
        cases.push_back({g, fmt::format("tau_minus/tau_plus={} {}", p.tau_minus / p.tau_plus, rtn::to_string(p.start)),
                         TelegraphSource{p.delta, p.tau_plus, p.tau_minus, p.p_plus}, p.start, p.m, p.t,
                         std::nullopt, -1});
      }
    } else if (g == "schedule") {
      const auto src = TelegraphSource::symmetric(1.0, 1.0);
      for (int n : {2, 4, 8}) {
        cases.push_back({g, fmt::format("suppression n={}", n), src, rtn::StartPolicy::mixed, 2.0, 2.0,
                         rtn::PulseSchedule::suppression(2.0, n), -1});
      }
      cases.push_back({g, "waiting n=2 wait=30", src, rtn::StartPolicy::mixed, 2.0, 2.0,
                       rtn::PulseSchedule::waiting(2.0, 2, 30.0), -1});
      cases.push_back({g, "waiting n=4 wait=0.5", src, rtn::StartPolicy::mixed, 2.0, 2.0,
                       rtn::PulseSchedule::waiting(2.0, 4, 0.5), -1});
    } else if (g == "conditional") {
      for (int f : o.flips) {
        if (f < 0) throw UsageError("--flips values must be >= 0");
        cases.push_back({g, fmt::format("theta^2 given f={}", f), TelegraphSource::symmetric(1.0, 1.0),
                         rtn::StartPolicy::mixed, 0.0, 1.0, std::nullopt, f});
      }
    } else {
      throw UsageError("unknown grid '" + g + "' (expected symmetric|general|schedule|conditional)");
    }
  }
  return cases;
}

int run_verify(const VerifyOptions& o) {
  const auto base = o.common.mc_settings();
  if (base.n_samples < 2) throw UsageError("--samples must be >= 2 for verify");
  const auto cases = verify_cases(o);
  auto rows = evaluate_rows(cases.size(), [&](std::size_t i) {
    const auto& c = cases[i];
    auto s = base;
    s.seed = row_seed(base.seed, i);
    rtn::ComplexValue analytic;
    rtn::ComplexValue mc;
    double se_re = 0.0, se_im = 0.0;
    std::string status = "pass";
    std::string formula;
    if (c.flips >= 0) {
      formula = "conditional_moment";
      const double theta_c = c.source.delta * c.t;
      analytic = {rtn::conditional_moment(theta_c, 2, c.flips), 0.0};
      try {
        const auto est = rtn::mc::estimate_conditional(
            c.source, c.t, c.flips, [](double th) { return th * th; }, c.start, s);
        mc = {est.mean, 0.0};
        se_re = est.std_error;
      } catch (const rtn::mc::InfeasibleSampling& e) {
        status = "infeasible";
        fmt::print(stderr, "verify: {} {}: {}\n", c.grid, c.label, e.what());
      }
    } else if (c.schedule) {
      formula = "schedule_char_fn";
      analytic = rtn::schedule_char_fn(*c.schedule, c.source, c.m);
      const auto est = rtn::mc::estimate_schedule(*c.schedule, c.source, c.m, s);
      mc = est.mean;
      se_re = est.se_re;
      se_im = est.se_im;
    } else {
      formula = c.source.is_symmetric() ? "cos_symmetric" : "char_fn_general";
      analytic = c.source.is_symmetric()
                     ? rtn::ComplexValue{rtn::cos_expectation_symmetric(c.source, {c.m, c.t}), 0.0}
                     : rtn::char_fn_general(c.source, {c.m, c.t}, c.start);
      const auto est = rtn::mc::estimate_char_fn(c.source, {c.m, c.t}, c.start, s);
      mc = est.mean;
      se_re = est.se_re;
      se_im = est.se_im;
    }
    double z = 0.0;
    if (status != "infeasible") {
      z = std::max(z_score(mc.re - analytic.re, se_re), z_score(mc.im - analytic.im, se_im));
      if (!(z <= 4.0)) status = "fail";
    }
    return Row{c.grid, c.label, rtn::to_string(c.start), c.m, c.t, c.source.delta, c.source.tau_plus,
               c.source.tau_minus, c.source.p_plus, static_cast<double>(c.flips), analytic.re, analytic.im,
               mc.re, mc.im, se_re, se_im, z, status, formula,
               params_hash({{"grid", c.grid}, {"label", c.label}, {"samples", std::to_string(s.n_samples)},
                            {"seed", std::to_string(s.seed)}, {"workers", std::to_string(s.workers)}})};
  });

  const auto table = make_table({"grid", "label", "start", "m", "t", "delta", "tau_plus", "tau_minus", "p_plus",
                                 "flips", "analytic_re", "analytic_im", "mc_re", "mc_im", "se_re", "se_im",
                                 "z_max", "status", "formula", "params_hash"},
                                std::move(rows));
  int failed = 0, infeasible = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& status = table.text(i, "status");
    failed += status == "fail";
    infeasible += status == "infeasible";
    worst = std::max(worst, table.number(i, "z_max"));
  }
  emit(table, o.common);
  fmt::print(stderr, "verify: {} rows, {} pass, {} fail, {} infeasible; worst |diff|/SE = {:.3f}\n",
             table.rows.size(), table.rows.size() - failed - infeasible, failed, infeasible, worst);
  return failed ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

struct TraceOptions {
  CommonOptions common;
  SourceOptions source;
  double t = 10.0;
  std::string start = "mixed";
};

int run_trace(const TraceOptions& o) {
  const auto src = o.source.source();
  if (!(o.t >= 0) || !std::isfinite(o.t)) throw UsageError("--t must be a finite time >= 0");
  rtn::PhiloxStream rng(o.common.seed, 0);
  const auto path = rtn::mc::sample_path(src, o.t, rng, rtn::parse_start_policy(o.start));

  Table table;
  table.columns = {"event", "time", "y", "theta"};
  double y = path.start_state == rtn::State::positive ? src.delta : -src.delta;
  double theta = 0.0, prev = 0.0;
  table.add_row({std::string("start"), 0.0, y, 0.0});
  for (double ft : path.flip_times) {
    theta += y * (ft - prev);
    prev = ft;
    y = -y;
    table.add_row({std::string("flip"), ft, y, theta});
  }
  table.add_row({std::string("end"), o.t, y, path.theta_final});
  emit(table, o.common);
  return kOk;
}

// ---------------------------------------------------------------------------
// qubit
// ---------------------------------------------------------------------------

struct QubitOptions {
  CommonOptions common;
  SourceOptions source;
  std::string noise = "rtn";
  std::vector<double> t{1.0};
  std::vector<double> sigma{0.1};
  int n = 4;
};

int run_qubit(const QubitOptions& o) {
  if (o.noise == "gaussian") {
    auto rows = evaluate_rows(o.sigma.size(), [&](std::size_t i) {
      const double s = o.sigma[i];
      const auto p = rtn::probs_gaussian(s);
      const auto q = rtn::probs_gaussian_quartic(s);
      return Row{std::string("probs_gaussian"), s, p.n0, p.n1, p.n2, p.completeness(), q.n0, q.n1, q.n2,
                 params_hash({{"sigma", num(s)}})};
    });
    emit(make_table({"formula", "sigma", "n0", "n1", "n2", "completeness", "n0_quartic", "n1_quartic",
                     "n2_quartic", "params_hash"},
                    std::move(rows)),
         o.common);
    return kOk;
  }
  const bool suppressed = o.noise == "suppressed";
  const auto src = TelegraphSource::symmetric(o.source.delta, o.source.tau);
  src.validate();
  auto rows = evaluate_rows(o.t.size(), [&](std::size_t i) {
    const double t = o.t[i];
    const auto p = suppressed ? rtn::probs_rtn_suppressed(src, t, o.n) : rtn::probs_rtn(src, t);
    return Row{std::string(suppressed ? "probs_rtn_suppressed" : "probs_rtn"), t, src.delta, src.tau_plus,
               static_cast<double>(suppressed ? o.n : 1), p.n0, p.n1, p.n2, p.completeness(),
               params_hash({{"noise", o.noise}, {"t", num(t)}, {"delta", num(src.delta)},
                            {"tau_c", num(src.tau_plus)}, {"n", std::to_string(suppressed ? o.n : 1)}})};
  });
  emit(make_table({"formula", "t", "delta", "tau_c", "n", "n0", "n1", "n2", "completeness", "params_hash"},
                  std::move(rows)),
       o.common);
  return kOk;
}

// ---------------------------------------------------------------------------
// control
// ---------------------------------------------------------------------------

struct ControlOptions {
  CommonOptions common;
  SourceOptions source;
  std::string method = "suppression";
  std::string mode;
  std::vector<int> n{2, 4, 8, 16};
  double m = 1.0;
  double t = 1.0;
  std::optional<double> wait;
  bool mc = false;
};

int run_control(const ControlOptions& o) {
  const auto src = TelegraphSource::symmetric(o.source.delta, o.source.tau);
  src.validate();
  const bool waiting = o.method == "waiting";
  const std::string mode = o.mode.empty() ? (waiting ? "exact" : "exact_transfer") : o.mode;
  // Parse once up front so a bad mode fails before any work.
  if (waiting) {
    rtn::parse_waiting_mode(mode);
  } else {
    rtn::parse_suppression_mode(mode);
  }
  const double wait = o.wait.value_or(100.0 * src.tau_plus);
  if (!(wait >= 0)) throw UsageError("--wait must be >= 0");
  const auto settings = o.mc ? std::optional(o.common.mc_settings()) : std::nullopt;

  auto rows = evaluate_rows(o.n.size(), [&](std::size_t i) {
    const int n = o.n[i];
    if (n < 1) throw UsageError("--n values must be >= 1");
    rtn::ComplexValue v;
    rtn::PulseSchedule schedule;
    if (waiting) {
      v = {rtn::waiting_method_expectation(src, o.m, o.t, n, rtn::parse_waiting_mode(mode)), 0.0};
      schedule = rtn::PulseSchedule::waiting(o.t, n, wait);
    } else {
      v = rtn::suppression_method_expectation(src, o.m, o.t, n, rtn::parse_suppression_mode(mode));
      schedule = rtn::PulseSchedule::suppression(o.t, n);
    }
    const auto exact = rtn::schedule_char_fn(schedule, src, o.m);
    Row row{"control_" + o.method, mode, static_cast<double>(n), o.m, o.t, src.delta, src.tau_plus,
            v.re, v.im, 1.0 - v.re, exact.re, exact.im};
    if (settings) {
      auto s = *settings;
      s.seed = row_seed(s.seed, i);
      const auto est = rtn::mc::estimate_schedule(schedule, src, o.m, s);
      const double z = std::max(z_score(est.mean.re - exact.re, est.se_re),
                                z_score(est.mean.im - exact.im, est.se_im));
      row.insert(row.end(), {est.mean.re, est.mean.im, est.se_re, est.se_im, z});
    }
    row.emplace_back(params_hash({{"method", o.method}, {"mode", mode}, {"n", std::to_string(n)},
                                  {"m", num(o.m)}, {"t", num(o.t)}, {"delta", num(src.delta)},
                                  {"tau_c", num(src.tau_plus)}, {"wait", waiting ? num(wait) : "none"}}));
    return row;
  });
  std::vector<std::string> cols{"formula",  "mode",     "n",     "m",           "t",          "delta",
                                "tau_c",    "value_re", "value_im", "error", "schedule_re", "schedule_im"};
  if (o.mc) cols = concat(cols, {"mc_re", "mc_im", "se_re", "se_im", "z_max"});
  cols.emplace_back("params_hash");
  emit(make_table(cols, std::move(rows)), o.common);
  return kOk;
}

}  // namespace

void register_expect(CLI::App& app, int& exit_code) {
  auto* expect = app.add_subcommand("expect", "Evaluate closed-form expectations");
  expect->require_subcommand(1);
  const auto o = std::make_shared<ExpectOptions>();

  const auto add = [&](const std::string& name, const std::string& help, auto run) {
    auto* cmd = expect->add_subcommand(name, help);
    add_common_options(*cmd, o->common);
    cmd->callback([o, run, &exit_code] { exit_code = run(*o); });
    return cmd;
  };
  const auto add_point = [&](CLI::App* cmd) {
    cmd->add_option("--m", o->m, "Fourier multiplier(s)")->delimiter(',')->capture_default_str();
    cmd->add_option("--t", o->t, "Duration(s)")->delimiter(',')->capture_default_str();
  };
  const auto add_mc = [&](CLI::App* cmd) {
    cmd->add_flag("--mc", o->mc, "Add Monte Carlo columns");
  };

  auto* sym = add("symmetric", "E[cos m theta] for equal dwell times", run_expect_symmetric);
  add_source_options(*sym, o->source, false);
  add_point(sym);
  add_mc(sym);

  auto* gen = add("general", "E[exp(i m theta)] for arbitrary dwell times", run_expect_general);
  add_source_options(*gen, o->source, true);
  add_point(gen);
  gen->add_option("--start", o->start, "positive|negative|mixed")->capture_default_str();
  add_mc(gen);

  auto* gauss = add("gaussian", "E[cos m x] for Gaussian x", run_expect_gaussian);
  gauss->add_option("--m", o->m, "Fourier multiplier(s)")->delimiter(',')->capture_default_str();
  gauss->add_option("--sigma", o->sigma, "Standard deviation(s)")->delimiter(',')->capture_default_str();

  auto* multi = add("multi-source", "Product over independent sources", run_expect_multi);
  multi->add_option("--source", o->sources, "delta:tau_plus:tau_minus[:p_plus], repeatable");
  add_point(multi);
  add_mc(multi);

  auto* approx = add("approximation", "Approximate forms next to the exact value", run_expect_approximation);
  add_source_options(*approx, o->source, false);
  add_point(approx);
  approx->add_option("--regime", o->regime, "gaussian_limit|first_order_lambda|no_flip")
      ->capture_default_str();

  auto* var = add("variance", "Var(theta) with its short- and long-time limits", run_expect_variance);
  add_source_options(*var, o->source, false);
  var->add_option("--t", o->t, "Duration(s)")->delimiter(',')->capture_default_str();
  add_mc(var);

  auto* onef = add("one-over-f", "Variance of a 1/f ensemble", run_expect_one_over_f);
  onef->add_option("--r", o->r, "Number of sources")->capture_default_str();
  onef->add_option("--tau-a", o->tau_a, "Largest dwell time")->capture_default_str();
  onef->add_option("--tau-b", o->tau_b, "Smallest dwell time (power-law cutoff)")->capture_default_str();
  onef->add_option("--delta-mean", o->delta_mean, "Mean amplitude")->capture_default_str();
  onef->add_option("--delta-sd", o->delta_sd, "Amplitude spread")->capture_default_str();
  onef->add_option("--alpha", o->alpha, "Power-law exponent (> 1) instead of log-uniform");
  onef->add_option("--t", o->t, "Duration(s)")->delimiter(',')->capture_default_str();
  add_mc(onef);
}

void register_verify(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("verify", "Compare closed forms with Monte Carlo at 4 standard errors");
  const auto o = std::make_shared<VerifyOptions>();
  add_common_options(*cmd, o->common);
  cmd->add_option("--grid", o->grids, "symmetric,general,schedule,conditional")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--flips", o->flips, "Flip counts for the conditional grid")
      ->delimiter(',')
      ->capture_default_str();
  cmd->callback([o, &exit_code] { exit_code = run_verify(*o); });
}

void register_trace(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("trace", "Sample one path: flip times, signal and integrated theta");
  const auto o = std::make_shared<TraceOptions>();
  add_common_options(*cmd, o->common);
  add_source_options(*cmd, o->source, true);
  cmd->add_option("--t", o->t, "Duration")->capture_default_str();
  cmd->add_option("--start", o->start, "positive|negative|mixed")->capture_default_str();
  cmd->callback([o, &exit_code] { exit_code = run_trace(*o); });
}

void register_qubit(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("qubit", "Two-qubit Pauli-Z error probabilities");
  const auto o = std::make_shared<QubitOptions>();
  add_common_options(*cmd, o->common);
  add_source_options(*cmd, o->source, false);
  cmd->add_option("--noise", o->noise, "rtn|suppressed|gaussian")
      ->check(CLI::IsMember({"rtn", "suppressed", "gaussian"}))
      ->capture_default_str();
  cmd->add_option("--t", o->t, "Drive duration(s)")->delimiter(',')->capture_default_str();
  cmd->add_option("--sigma", o->sigma, "Gaussian standard deviation(s)")->delimiter(',')->capture_default_str();
  cmd->add_option("--n", o->n, "Pieces for the suppressed schedule (even)")->capture_default_str();
  cmd->callback([o, &exit_code] { exit_code = run_qubit(*o); });
}

void register_control(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("control", "Waiting and sign-reversal error suppression");
  const auto o = std::make_shared<ControlOptions>();
  add_common_options(*cmd, o->common);
  add_source_options(*cmd, o->source, false);
  cmd->add_option("--method", o->method, "waiting|suppression")
      ->check(CLI::IsMember({"waiting", "suppression"}))
      ->capture_default_str();
  cmd->add_option("--mode", o->mode,
                  "exact|leading_order (waiting), independent_pairs|exact_transfer (suppression)");
  cmd->add_option("--n", o->n, "Piece count(s)")->delimiter(',')->capture_default_str();
  cmd->add_option("--m", o->m, "Fourier multiplier")->capture_default_str();
  cmd->add_option("--t", o->t, "Total drive time")->capture_default_str();
  cmd->add_option("--wait", o->wait, "Wait between pieces for the waiting schedule (default 100 tau)");
  cmd->add_flag("--mc", o->mc, "Add Monte Carlo schedule estimates");
  cmd->callback([o, &exit_code] { exit_code = run_control(*o); });
}

}  // namespace rtnoise
