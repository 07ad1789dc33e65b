// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
//
// rtnoise: expectations, Monte Carlo checks, sweeps and traces for random
// telegraph noise. Tables go to stdout (or --out); diagnostics to stderr.
#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random telegraph noise expectations and Monte Carlo checks", "rtnoise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rtnoise 1.0.0");

  int exit_code = rtnoise::kOk;
  rtnoise::register_expect(app, exit_code);
  rtnoise::register_verify(app, exit_code);
  rtnoise::register_sweep(app, exit_code);
  rtnoise::register_trace(app, exit_code);
  rtnoise::register_qubit(app, exit_code);
  rtnoise::register_control(app, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rtnoise::kUsage;
  } catch (const std::logic_error& e) {
    fmt::print(stderr, "rtnoise: {}\n", e.what());
    return rtnoise::kUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "rtnoise: error: {}\n", e.what());
    return rtnoise::kUsage;
  }
  return exit_code;
}
