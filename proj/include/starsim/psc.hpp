// SPDX-License-Identifier: Apache-2.0
//
// Phase-shift configuration strategies for the coupled T&R surface model.
//
//   ps          primary/secondary: cophase one user exactly, serve the other
//               through the auxiliary-bit choice
//   dp          diversity preserving: split the phase error symmetrically
//               between both users (|error| <= pi/4 each, opposite signs)
//   tr          element grouping: each element fully transmits or fully
//               reflects, cophased for its own user
//   random      uniform reflection phases, coupling-consistent transmission
//   independent both sides cophased, energy conservation kept, phase
//               coupling intentionally dropped (performance upper bound)

#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "starsim/channel.hpp"
#include "starsim/rng.hpp"
#include "starsim/surface.hpp"

namespace starsim::psc {

enum class Kind { ps, dp, tr, random, independent };

/// Which of the two admissible transmission phases the ps strategy picks for
/// the secondary user: the condition exactly as printed, or the choice
/// minimizing the residual against the secondary cophase target (keeps the
/// residual strictly inside (-pi/2, pi/2]).
enum class NuRule { literal, closest };

struct StrategySpec {
  Kind kind = Kind::dp;
  double beta_r = 0.70710678118654752440;  // common reflection amplitude
  User primary_user = User::R;             // ps only
  NuRule nu_rule = NuRule::closest;        // ps only

  /// tr only: indices (0-based) of the fully transmitting elements.
  /// Disengaged -> the first floor(M * t_group_fraction) indices in
  /// row-major order. An explicitly empty set means every element reflects.
  std::optional<std::vector<Eigen::Index>> t_group;
  double t_group_fraction = 0.5;

  void check(Eigen::Index m) const;  // throws std::invalid_argument

  /// Resolved transmit-group size for a surface of m elements.
  Eigen::Index t_group_size(Eigen::Index m) const;
};

surface::SurfaceCoefficients ps_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec);
surface::SurfaceCoefficients dp_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec);
surface::SurfaceCoefficients tr_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec);
surface::SurfaceCoefficients random_psc(const StrategySpec& spec, rng::Stream& stream,
                                        Eigen::Index m);
surface::SurfaceCoefficients independent_psc(const channel::ChannelRealization& ch,
                                             const StrategySpec& spec);

/// Dispatch on spec.kind. The stream is consumed only by the random strategy.
surface::SurfaceCoefficients configure(const channel::ChannelRealization& ch,
                                       const StrategySpec& spec, rng::Stream& stream);

/// First floor(m * fraction) indices in row-major order.
std::vector<Eigen::Index> default_t_group(Eigen::Index m, double fraction);

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

}  // namespace starsim::psc
