// SPDX-License-Identifier: Apache-2.0
//
// Seeded trial engine: outage curves vs transmit SNR, received-power curves
// vs element count, and log-log slope fits with confidence intervals.
//
// Reproducibility contract: trials are partitioned into fixed-size blocks;
// each (sweep point, block) pair draws from its own deterministic stream and
// block results are reduced in block order, so every estimate is bit-stable
// for a given (seed, trials) regardless of the number of worker threads.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "starsim/channel.hpp"
#include "starsim/link.hpp"
#include "starsim/psc.hpp"

namespace starsim::mc {

/// How the surface path and the direct path combine into the decision
/// variable of the outage event. `coherent` compares |h_s + h_d|^2 against
/// the threshold (physical field sum); `power_sum` compares
/// |h_s|^2 + |h_d|^2 (resolvable-path combining, the system view under
/// which the random-configuration analysis holds).
enum class Combining { coherent, power_sum };

struct UserModel {
  channel::RicianParams h;                       // element -> user leg
  std::optional<channel::RicianParams> direct;   // BS -> user, absent = blocked
};

struct TrialModel {
  Eigen::Index m = 16;           // element count
  channel::RicianParams g;       // BS -> element leg (shared)
  UserModel user_t;
  UserModel user_r;
  psc::StrategySpec strategy;
  link::MaConfig ma;             // p_bs is overridden per SNR point
  Combining random_combining = Combining::power_sum;  // random strategy only
};

struct PointEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long trials = 0;
  std::optional<double> analytic;  // overlay, filled by the caller
};

enum class AxisKind { snr_db, element_count, linear };

struct SweepResult {
  AxisKind axis_kind = AxisKind::linear;
  std::vector<double> axis;
  std::vector<PointEstimate> user_t;
  std::vector<PointEstimate> user_r;

  const std::vector<PointEstimate>& user(User u) const {
    return u == User::T ? user_t : user_r;
  }
  std::vector<PointEstimate>& user(User u) { return u == User::T ? user_t : user_r; }
};

/// Outage proportion per user per SNR point (axis = P_bs / noise in dB),
/// with 95% Wilson intervals; zero-failure points report the rule-of-three
/// upper limit. Throws std::invalid_argument for trials <= 0.
SweepResult estimate_outage(const TrialModel& model, const std::vector<double>& snr_db_grid,
                            long trials, std::uint64_t seed, int workers);

/// Mean received channel power E|H|^2 per user at unit transmit power,
/// normal-approximation 95% intervals, swept over element counts.
SweepResult estimate_power(const TrialModel& model, const std::vector<Eigen::Index>& m_grid,
                           long trials, std::uint64_t seed, int workers);

/// One trial's channel draws plus the configured coefficients; exposed for
/// tests and for sampling surface-sum amplitudes directly.
struct TrialOutcome {
  channel::ChannelRealization realization;
  surface::SurfaceCoefficients coefficients;
};
TrialOutcome run_trial(const TrialModel& model, rng::Stream& stream);

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  long points_used = 0;
};

struct FitWindow {
  double axis_min = -std::numeric_limits<double>::infinity();
  double axis_max = std::numeric_limits<double>::infinity();
  double value_min = 0.0;  // exclusive; zero estimates are always excluded
  double value_max = std::numeric_limits<double>::infinity();
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least squares of log(estimate) on log(axis value) over the window (dB
/// axes are converted to linear power first). Diversity estimates are the
/// negated slope of an outage sweep. Throws InsufficientDataError when
/// fewer than 3 usable points remain.
FitResult fit_exponent(const SweepResult& result, User user, const FitWindow& window = {});

/// 95% Wilson score interval for k successes out of n.
void wilson_interval(long k, long n, double& lo, double& hi);

}  // namespace starsim::mc
