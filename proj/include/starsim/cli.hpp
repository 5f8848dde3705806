// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: subcommand dispatch, CSV emission with full
// round-trip precision, analytic overlays, the run manifest, and the
// analytic-consistency self-check table.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime numerical error.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starsim/scenario.hpp"

namespace starsim::cli {

inline constexpr const char* kVersion = "starsim 1.0.0";

struct RunOptions {
  std::string subcommand;            // outage | scaling | pattern | validate
  std::string config_path;           // empty -> built-in defaults
  std::string output_dir = ".";
  std::vector<std::string> overrides;   // section.key=value
  std::vector<std::string> strategies;  // empty -> the configured strategy
  bool dump_coefficients = false;       // pattern: also write the coefficient CSV
  long fading_average = 0;              // pattern: 0 = pure LoS geometry,
                                        // N > 0 = mean power over N fading draws
};

/// Runs one experiment family end to end; returns the process exit code.
/// Progress and diagnostics go to `log` (standard error in the tool).
int run(const RunOptions& opts, std::ostream& out, std::ostream& log);

/// Closed-form overlay for an outage sweep (clamped to [0,1]); NaN when no
/// formula applies to this strategy/user.
double outage_overlay(const scenario::ScenarioConfig& cfg, psc::Kind kind, User user,
                      double snr_db);

/// Closed-form overlay for a power sweep: E|H|^2 at unit transmit power.
double power_overlay(const scenario::ScenarioConfig& cfg, psc::Kind kind, User user, long m);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Analytic-consistency self-checks (asymptote vs quadrature, PDF
/// normalization, slope vs diversity order, special-function identities).
std::vector<CheckResult> self_checks(const scenario::ScenarioConfig& cfg);

}  // namespace starsim::cli
