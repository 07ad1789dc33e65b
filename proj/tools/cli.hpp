// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <CLI11.hpp>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rtn/monte_carlo.hpp"
#include "rtn/table.hpp"
#include "rtn/types.hpp"

namespace rtnoise {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2 };

/// Bad flags or a spec that does not validate. Reported with exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flags accepted by every subcommand.
struct CommonOptions {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  int workers = rtn::mc::kDefaultWorkers;

  [[nodiscard]] rtn::mc::Settings mc_settings() const;
};

void add_common_options(CLI::App& cmd, CommonOptions& opts);

/// Source flags: --delta, --tau (sets both dwell times), --tau-plus, --tau-minus, --p-plus.
struct SourceOptions {
  double delta = 1.0;
  double tau = 1.0;
  double tau_plus = 0.0;
  double tau_minus = 0.0;
  double p_plus = 0.5;

  [[nodiscard]] rtn::TelegraphSource source() const;
};

void add_source_options(CLI::App& cmd, SourceOptions& opts, bool asymmetric);

/// Writes the finished table to --out (or stdout) in --format.
void emit(const rtn::Table& table, const CommonOptions& opts);

/// Stable 64-bit FNV-1a digest of name=value pairs, as 16 hex digits.
std::string params_hash(const std::vector<std::pair<std::string, std::string>>& params);
std::string num(double x);

/// Evaluates row(i) for i < n across OpenMP threads and returns the rows in
/// index order. The first exception thrown by any row is rethrown.
std::vector<std::vector<rtn::Cell>> evaluate_rows(
    std::size_t n, const std::function<std::vector<rtn::Cell>(std::size_t)>& row);

/// Seed for row i of a multi-row run, so rows draw independent streams.
std::uint64_t row_seed(std::uint64_t seed, std::size_t i);

/// Each register_* adds one subcommand; `exit_code` receives its result.
void register_expect(CLI::App& app, int& exit_code);
void register_verify(CLI::App& app, int& exit_code);
void register_trace(CLI::App& app, int& exit_code);
void register_qubit(CLI::App& app, int& exit_code);
void register_control(CLI::App& app, int& exit_code);
void register_sweep(CLI::App& app, int& exit_code);

}  // namespace rtnoise
