// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
//
// `rtnoise sweep SPEC.json`: one parameter over a grid, everything else fixed.
//
//   {
//     "quantity": "suppression",
//     "sweep": {"parameter": "n_segments", "min": 4, "max": 32, "count": 4, "spacing": "log"},
//     "source": {"delta": 1, "tau_c": 1},
//     "m": 0.1, "t": 1,
//     "mc": {"samples": 100000, "seed": 7}
//   }
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "rtn/analytic.hpp"
#include "rtn/pulse_control.hpp"
#include "rtn/qubit_dephasing.hpp"

namespace rtnoise {

namespace {

using json = nlohmann::json;
using rtn::Cell;
using Row = std::vector<Cell>;

struct Quantity {
  std::vector<std::string> params;   // parameters that may be swept
  std::vector<std::string> columns;  // value columns
  std::vector<std::string> mc_columns;
};

const std::map<std::string, Quantity>& quantities() {
  static const std::map<std::string, Quantity> q{
      {"cos_symmetric", {{"m", "t", "tau_c", "delta"}, {"value"}, {"mc_mean", "mc_se"}}},
      {"char_fn_general",
       {{"m", "t", "tau_c", "tau_plus", "tau_minus", "delta"},
        {"value_re", "value_im"},
        {"mc_re", "mc_im", "se_re", "se_im"}}},
      {"variance", {{"t", "tau_c", "delta"}, {"variance", "short_time", "long_time"}, {"mc_mean", "mc_se"}}},
      {"suppression",
       {{"m", "t", "tau_c", "delta", "n_segments"},
        {"exact_re", "exact_im", "exact_error", "pairs_re", "pairs_im", "pairs_error"},
        {"mc_re", "mc_im", "se_re", "se_im"}}},
      {"waiting",
       {{"m", "t", "tau_c", "delta", "n_segments"},
        {"exact", "leading_order", "exact_error", "leading_error", "schedule_re"},
        {"mc_re", "se_re"}}},
      {"qubit_rtn", {{"t", "tau_c", "delta"}, {"n0", "n1", "n2", "completeness"}, {}}},
      {"qubit_suppressed", {{"t", "tau_c", "delta", "n_segments"}, {"n0", "n1", "n2", "completeness"}, {}}},
      {"qubit_gaussian",
       {{"sigma"}, {"n0", "n1", "n2", "completeness", "n0_quartic", "n1_quartic", "n2_quartic"}, {}}},
      {"gaussian_cos", {{"m", "sigma"}, {"value"}, {}}},
      {"one_over_f", {{"t"}, {"approx", "quadrature", "rel_gap"}, {"mc_mean", "mc_se"}}},
  };
  return q;
}

struct SweepSpec {
  std::string quantity;
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool log_spacing = false;

  rtn::TelegraphSource source;
  double m = 1.0;
  double t = 1.0;
  double sigma = 0.1;
  int n_segments = 2;
  rtn::StartPolicy start = rtn::StartPolicy::mixed;
  std::optional<double> wait;
  rtn::OneOverFEnsemble ensemble;

  bool mc = false;
  CommonOptions common;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return fmt::format("line {}, column {}", line, col);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw UsageError(fmt::format("{}{}: unknown field", where, key));
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw UsageError(fmt::format("{}{}: expected a number", where, key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError(fmt::format("{}{}: must be finite", where, key));
  return x;
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw UsageError(fmt::format("{}{}: expected an integer", where, key));
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw UsageError(fmt::format("{}{}: expected a string", where, key));
  return v.get<std::string>();
}

const json& get_object(const json& obj, const std::string& key) {
  static const json empty = json::object();
  if (!obj.contains(key)) return empty;
  if (!obj.at(key).is_object()) throw UsageError(key + ": expected an object");
  return obj.at(key);
}

template <typename F>
auto field(const std::string& where, F f) {
  try {
    return f();
  } catch (const rtn::DomainError& e) {
    throw UsageError(where + ": " + e.what());
  }
}

SweepSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("spec is not valid JSON at {}: {}", line_col(text, e.byte), e.what()));
  }
  if (!doc.is_object()) throw UsageError("spec: expected a JSON object");
  reject_unknown(doc, "",
                 {"quantity", "sweep", "source", "m", "t", "sigma", "n_segments", "start", "wait", "ensemble",
                  "mc", "format", "out"});

  SweepSpec s;
  s.quantity = get_string(doc, "", "quantity", "");
  if (!quantities().count(s.quantity)) {
    std::string names;
    for (const auto& [k, _] : quantities()) names += (names.empty() ? "" : "|") + k;
    throw UsageError(fmt::format("quantity: '{}' is not one of {}", s.quantity, names));
  }

  if (!doc.contains("sweep")) throw UsageError("sweep: required");
  const auto& sw = get_object(doc, "sweep");
  reject_unknown(sw, "sweep.", {"parameter", "min", "max", "count", "spacing"});
  s.parameter = get_string(sw, "sweep.", "parameter", "");
  const auto& allowed = quantities().at(s.quantity).params;
  if (std::find(allowed.begin(), allowed.end(), s.parameter) == allowed.end()) {
    throw UsageError(fmt::format("sweep.parameter: '{}' cannot be swept for quantity '{}'", s.parameter,
                                 s.quantity));
  }
  if (!sw.contains("min") || !sw.contains("max")) throw UsageError("sweep.min/sweep.max: required");
  s.min = get_number(sw, "sweep.", "min", 0.0);
  s.max = get_number(sw, "sweep.", "max", 0.0);
  s.count = get_int(sw, "sweep.", "count", 1);
  const std::string spacing = get_string(sw, "sweep.", "spacing", "linear");
  if (spacing != "linear" && spacing != "log") throw UsageError("sweep.spacing: expected linear|log");
  s.log_spacing = spacing == "log";
  if (s.count < 1) throw UsageError("sweep.count: must be >= 1");
  if (s.min > s.max) throw UsageError("sweep.min: must be <= sweep.max");
  if (s.log_spacing && !(s.min > 0)) throw UsageError("sweep.min: log spacing requires min > 0");

  const auto& src = get_object(doc, "source");
  reject_unknown(src, "source.", {"delta", "tau_c", "tau_plus", "tau_minus", "p_plus"});
  const double tau_c = get_number(src, "source.", "tau_c", 1.0);
  s.source = {get_number(src, "source.", "delta", 1.0), get_number(src, "source.", "tau_plus", tau_c),
              get_number(src, "source.", "tau_minus", tau_c), get_number(src, "source.", "p_plus", 0.5)};
  field("source", [&] { s.source.validate(); });

  s.m = get_number(doc, "", "m", s.m);
  s.t = get_number(doc, "", "t", s.t);
  s.sigma = get_number(doc, "", "sigma", s.sigma);
  s.n_segments = get_int(doc, "", "n_segments", s.n_segments);
  s.start = field("start", [&] { return rtn::parse_start_policy(get_string(doc, "", "start", "mixed")); });
  if (doc.contains("wait")) s.wait = get_number(doc, "", "wait", 0.0);

  const auto& ens = get_object(doc, "ensemble");
  reject_unknown(ens, "ensemble.", {"r", "tau_a", "tau_b", "delta_mean", "delta_sd", "alpha"});
  s.ensemble.r = get_int(ens, "ensemble.", "r", 1);
  s.ensemble.tau_a = get_number(ens, "ensemble.", "tau_a", 10.0);
  s.ensemble.tau_b = get_number(ens, "ensemble.", "tau_b", 0.1);
  s.ensemble.delta_mean = get_number(ens, "ensemble.", "delta_mean", 1.0);
  s.ensemble.delta_sd = get_number(ens, "ensemble.", "delta_sd", 0.0);
  if (ens.contains("alpha")) s.ensemble.alpha = get_number(ens, "ensemble.", "alpha", 0.0);
  if (s.quantity == "one_over_f") field("ensemble", [&] { s.ensemble.validate(); });

  if (doc.contains("mc")) {
    const auto& mc = get_object(doc, "mc");
    reject_unknown(mc, "mc.", {"samples", "seed", "workers"});
    s.mc = true;
    if (mc.contains("samples")) {
      if (!mc.at("samples").is_number_integer()) throw UsageError("mc.samples: expected an integer");
      s.common.samples = mc.at("samples").get<std::int64_t>();
    }
    if (mc.contains("seed")) {
      if (!mc.at("seed").is_number_unsigned()) throw UsageError("mc.seed: expected a nonnegative integer");
      s.common.seed = mc.at("seed").get<std::uint64_t>();
    }
    s.common.workers = get_int(mc, "mc.", "workers", s.common.workers);
  }
  s.common.format = get_string(doc, "", "format", s.common.format);
  s.common.out = get_string(doc, "", "out", s.common.out);
  return s;
}

std::vector<double> grid_values(const SweepSpec& s) {
  std::vector<double> v(static_cast<std::size_t>(s.count));
  for (int i = 0; i < s.count; ++i) {
    const double f = s.count == 1 ? 0.0 : static_cast<double>(i) / (s.count - 1);
    v[static_cast<std::size_t>(i)] =
        s.log_spacing ? std::exp(std::log(s.min) + f * (std::log(s.max) - std::log(s.min)))
                      : s.min + f * (s.max - s.min);
  }
  // Pin the endpoints exactly.
  v.front() = s.min;
  v.back() = s.count == 1 ? s.min : s.max;
  if (s.parameter == "n_segments") {
    for (auto& x : v) x = std::round(x);
  }
  return v;
}

// The spec with the swept parameter set to x.
SweepSpec at(SweepSpec s, double x) {
  const auto& p = s.parameter;
  if (p == "m") s.m = x;
  if (p == "t") s.t = x;
  if (p == "sigma") s.sigma = x;
  if (p == "delta") s.source.delta = x;
  if (p == "tau_c") s.source.tau_plus = s.source.tau_minus = x;
  if (p == "tau_plus") s.source.tau_plus = x;
  if (p == "tau_minus") s.source.tau_minus = x;
  if (p == "n_segments") s.n_segments = static_cast<int>(x);
  return s;
}

std::vector<std::pair<std::string, std::string>> fixed_params(const SweepSpec& s) {
  return {{"quantity", s.quantity},
          {"m", num(s.m)},
          {"t", num(s.t)},
          {"sigma", num(s.sigma)},
          {"n_segments", std::to_string(s.n_segments)},
          {"delta", num(s.source.delta)},
          {"tau_plus", num(s.source.tau_plus)},
          {"tau_minus", num(s.source.tau_minus)},
          {"p_plus", num(s.source.p_plus)},
          {"start", rtn::to_string(s.start)},
          {"wait", s.wait ? num(*s.wait) : "default"},
          {"mc", s.mc ? fmt::format("{}/{}/{}", s.common.samples, s.common.seed, s.common.workers) : "off"}};
}

rtn::TelegraphSource symmetric_source(const SweepSpec& s) {
  if (!s.source.is_symmetric()) {
    throw UsageError("source: quantity '" + s.quantity + "' needs tau_plus == tau_minus (use tau_c)");
  }
  return s.source;
}

Row evaluate(const SweepSpec& s, std::size_t index) {
  field("source", [&] { s.source.validate(); });
  Row row;
  const auto push = [&row](std::initializer_list<double> xs) { row.insert(row.end(), xs.begin(), xs.end()); };
  auto settings = s.common.mc_settings();
  settings.seed = row_seed(settings.seed, index);
  const auto& q = s.quantity;

  if (q == "cos_symmetric") {
    const auto src = symmetric_source(s);
    push({rtn::cos_expectation_symmetric(src, {s.m, s.t})});
    if (s.mc) {
      const auto est = rtn::mc::estimate_char_fn(src, {s.m, s.t}, rtn::StartPolicy::mixed, settings);
      push({est.mean.re, est.se_re});
    }
  } else if (q == "char_fn_general") {
    const auto v = rtn::char_fn_general(s.source, {s.m, s.t}, s.start);
    push({v.re, v.im});
    if (s.mc) {
      const auto est = rtn::mc::estimate_char_fn(s.source, {s.m, s.t}, s.start, settings);
      push({est.mean.re, est.mean.im, est.se_re, est.se_im});
    }
  } else if (q == "variance") {
    const auto src = symmetric_source(s);
    const double d2 = src.delta * src.delta, tau = src.tau_plus;
    push({rtn::variance_symmetric(src, s.t), d2 * s.t * s.t, d2 * (s.t * tau - tau * tau / 2)});
    if (s.mc) {
      const auto est = rtn::mc::estimate_theta_moment(src, s.t, 2, rtn::StartPolicy::mixed, settings);
      push({est.mean, est.std_error});
    }
  } else if (q == "suppression") {
    const auto src = symmetric_source(s);
    const auto exact =
        rtn::suppression_method_expectation(src, s.m, s.t, s.n_segments, rtn::SuppressionMode::exact_transfer);
    const auto pairs = rtn::suppression_method_expectation(src, s.m, s.t, s.n_segments,
                                                           rtn::SuppressionMode::independent_pairs);
    push({exact.re, exact.im, 1 - exact.re, pairs.re, pairs.im, 1 - pairs.re});
    if (s.mc) {
      const auto est =
          rtn::mc::estimate_schedule(rtn::PulseSchedule::suppression(s.t, s.n_segments), src, s.m, settings);
      push({est.mean.re, est.mean.im, est.se_re, est.se_im});
    }
  } else if (q == "waiting") {
    const auto src = symmetric_source(s);
    const double exact = rtn::waiting_method_expectation(src, s.m, s.t, s.n_segments, rtn::WaitingMode::exact);
    const double lead =
        rtn::waiting_method_expectation(src, s.m, s.t, s.n_segments, rtn::WaitingMode::leading_order);
    const auto schedule = rtn::PulseSchedule::waiting(s.t, s.n_segments, s.wait.value_or(100 * src.tau_plus));
    push({exact, lead, 1 - exact, 1 - lead, rtn::schedule_char_fn(schedule, src, s.m).re});
    if (s.mc) {
      const auto est = rtn::mc::estimate_schedule(schedule, src, s.m, settings);
      push({est.mean.re, est.se_re});
    }
  } else if (q == "qubit_rtn" || q == "qubit_suppressed") {
    const auto src = symmetric_source(s);
    const auto p = q == "qubit_rtn" ? rtn::probs_rtn(src, s.t) : rtn::probs_rtn_suppressed(src, s.t, s.n_segments);
    push({p.n0, p.n1, p.n2, p.completeness()});
  } else if (q == "qubit_gaussian") {
    const auto p = rtn::probs_gaussian(s.sigma);
    const auto e = rtn::probs_gaussian_quartic(s.sigma);
    push({p.n0, p.n1, p.n2, p.completeness(), e.n0, e.n1, e.n2});
  } else if (q == "gaussian_cos") {
    push({rtn::gaussian_cos_expectation(s.m, s.sigma)});
  } else if (q == "one_over_f") {
    const double approx = rtn::variance_one_over_f(s.ensemble, s.t, rtn::OneOverFMode::approx);
    const double quad = rtn::variance_one_over_f(s.ensemble, s.t, rtn::OneOverFMode::quadrature);
    push({approx, quad, (approx - quad) / quad});
    if (s.mc) {
      const auto est = rtn::mc::estimate_ensemble_variance(s.ensemble, s.t, settings);
      push({est.mean, est.std_error});
    }
  }
  return row;
}

struct SweepOptions {
  CommonOptions common;
  std::string spec_path;
  bool mc = false;
};

int run_sweep(const SweepOptions& o, const CLI::App& cmd) {
  std::ifstream in(o.spec_path, std::ios::binary);
  if (!in) throw UsageError("cannot read spec file " + o.spec_path);
  std::stringstream buf;
  buf << in.rdbuf();
  SweepSpec spec = parse_spec(buf.str());

  if (cmd.count("--format")) spec.common.format = o.common.format;
  if (cmd.count("--out")) spec.common.out = o.common.out;
  if (cmd.count("--seed")) spec.common.seed = o.common.seed;
  if (cmd.count("--samples")) spec.common.samples = o.common.samples;
  if (cmd.count("--workers")) spec.common.workers = o.common.workers;
  if (o.mc) spec.mc = true;
  rtn::parse_table_format(spec.common.format);
  field("mc", [&] { (void)spec.common.mc_settings(); });

  const auto& q = quantities().at(spec.quantity);
  const auto xs = grid_values(spec);
  auto rows = evaluate_rows(xs.size(), [&](std::size_t i) {
    const SweepSpec s = at(spec, xs[i]);
    Row row{xs[i]};
    const Row values = field(fmt::format("row {} ({}={})", i, spec.parameter, num(xs[i])),
                             [&] { return evaluate(s, i); });
    row.insert(row.end(), values.begin(), values.end());
    row.emplace_back(spec.quantity);
    row.emplace_back(params_hash(fixed_params(s)));
    return row;
  });

  rtn::Table table;
  table.columns.push_back(spec.parameter);
  table.columns.insert(table.columns.end(), q.columns.begin(), q.columns.end());
  if (spec.mc) table.columns.insert(table.columns.end(), q.mc_columns.begin(), q.mc_columns.end());
  table.columns.emplace_back("formula");
  table.columns.emplace_back("params_hash");
  for (auto& r : rows) table.add_row(std::move(r));
  emit(table, spec.common);
  return kOk;
}

}  // namespace

void register_sweep(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("sweep", "Evaluate a JSON sweep spec; flags override spec fields");
  const auto o = std::make_shared<SweepOptions>();
  add_common_options(*cmd, o->common);
  cmd->add_option("spec", o->spec_path, "Sweep spec (JSON)")->required();
  cmd->add_flag("--mc", o->mc, "Add Monte Carlo columns even if the spec has no mc block");
  cmd->callback([o, cmd, &exit_code] { exit_code = run_sweep(*o, *cmd); });
}

}  // namespace rtnoise
