// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a strict line-oriented [section] key = value
// format (unknown keys are errors), defaults for the reference two-user
// desk-scale setup, and the mapping from configuration to trial models.
// All dB quantities are converted to linear exactly once, here.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "starsim/montecarlo.hpp"
#include "starsim/pattern.hpp"

namespace starsim::scenario {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DirectConfig {
  bool present = true;
  double k_db = 1.3;
  /// Target ratio E|h_d| / E|h_m| against the user's element leg; values
  /// <= 0 fall back to the geometric BS-user path loss.
  double eta = 1.0;
};

struct UserConfig {
  double distance_m = 10.0;
  double angle_deg = 0.0;
  double k_db = 1.3;
  double alpha = 2.2;
  double rho0_db = -30.0;
  double omega = 1.0;
  DirectConfig direct;
};

struct SurfaceConfig {
  int m_h = 8;
  int m_v = 8;
  double spacing_wavelengths = 0.5;
  double beta_r = 0.70710678118654752440;
  psc::Kind strategy = psc::Kind::dp;
  User primary_user = User::R;
  psc::NuRule nu_rule = psc::NuRule::closest;
  double t_group_fraction = 0.5;
};

struct BsConfig {
  double distance_m = 50.0;
  double angle_deg = 270.0;
  double k_db = 1.3;
  double alpha = 2.2;
  double rho0_db = -30.0;
  double omega = 1.0;
};

struct MaSection {
  link::Scheme scheme = link::Scheme::oma;
  double c_t_sq = 0.6;
  double c_r_sq = 0.4;
  double rate_t = 1.0;
  double rate_r = 1.0;
  double noise_dbm = -50.0;
};

struct SimSection {
  long trials = 20000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::vector<double> snr_db = {0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  std::vector<long> m_grid = {16, 32, 64, 128, 256};
  mc::Combining random_outage_model = mc::Combining::power_sum;
};

struct PatternSection {
  double wavelength_m = 0.1;
  double eval_radius_m = 10.0;
  double angle_step_deg = 0.5;
  bool normalize_to_peak = true;
};

struct ScenarioConfig {
  SurfaceConfig surface;
  BsConfig bs;
  UserConfig user_t{10.0, 0.0, 1.3, 2.2, -30.0, 1.0, {}};
  UserConfig user_r{10.0, 150.0, 1.3, 2.2, -30.0, 1.0, {}};
  MaSection ma;
  SimSection sim;
  PatternSection pattern;

  static ScenarioConfig defaults();

  /// Parse from config text; throws ConfigError naming the offending key.
  static ScenarioConfig from_text(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);

  /// Apply "section.key=value" overrides on top of this config.
  void apply_overrides(const std::vector<std::string>& overrides);

  /// Semantic checks beyond parsing (positive values, sorted grids,
  /// feasible NOMA target rates). Throws ConfigError with the key path.
  void check() const;

  int elements() const { return surface.m_h * surface.m_v; }

  /// Distance-scaled Rician parameters for each leg.
  channel::RicianParams g_params() const;
  channel::RicianParams h_params(User u) const;
  std::optional<channel::RicianParams> direct_params(User u) const;

  /// BS-user straight-line distance from the angular layout.
  double direct_distance_m(User u) const;

  link::MaConfig ma_config() const;
  mc::TrialModel trial_model() const;
  pattern::PatternConfig pattern_config() const;
  psc::StrategySpec strategy_spec() const;

  /// Canonical "section.key = value" listing (sorted), used for the
  /// manifest and the config hash.
  std::string canonical() const;
};

/// FNV-1a hash of the canonical text, as fixed-width hex.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace starsim::scenario
