// SPDX-License-Identifier: Apache-2.0
//
// Radiation pattern of a configured surface over azimuth: spherical-wave
// illumination from the BS, spherical-wave propagation from every element
// to an evaluation circle. Per-element distances are exact, so near-field
// focusing at desk-scale ranges is represented.
//
// Coordinates follow surface.hpp: elements in the y-z plane, +x normal into
// the transmission half-space, azimuth measured from +x in the x-y plane.
// Evaluation angles with cos(angle) <= 0 (including the 90/270 boundary)
// use the reflection coefficients, the rest the transmission coefficients.

#pragma once

#include <vector>

#include "starsim/channel.hpp"
#include "starsim/surface.hpp"

namespace starsim::pattern {

struct PatternConfig {
  surface::SurfaceGeometry geometry;
  double wavelength_m = 0.1;
  double bs_angle_deg = 270.0;
  double bs_distance_m = 50.0;
  double eval_radius_m = 10.0;
  std::vector<double> angle_grid_deg;  // sorted, in [0, 360)
  bool normalize_to_peak = true;       // otherwise absolute 20 log10 |A|

  void check() const;
};

struct Pattern {
  std::vector<double> angle_deg;
  std::vector<double> power_db;
};

Pattern compute_pattern(const PatternConfig& cfg, const surface::SurfaceCoefficients& coeffs);

/// Grid of angles [0, 360) with the given step.
std::vector<double> angle_grid(double step_deg);

/// Deterministic pure-LoS channel draw for the pattern geometry: every
/// coefficient is a spherical-wave phasor with 1/d amplitude, so strategy
/// phases reproduce exact geometric cophasing. Direct links are included
/// unless blocked.
channel::ChannelRealization los_realization(const PatternConfig& cfg, double user_t_angle_deg,
                                            double user_t_distance_m, double user_r_angle_deg,
                                            double user_r_distance_m, bool direct_links);

}  // namespace starsim::pattern
