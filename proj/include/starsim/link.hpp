// SPDX-License-Identifier: Apache-2.0
//
// End-to-end channel composition and OMA/NOMA rate, threshold, and
// outage-event evaluation for a single realization.

#pragma once

#include <complex>

#include "starsim/channel.hpp"
#include "starsim/surface.hpp"

namespace starsim::link {

enum class Scheme { oma, noma };

struct MaConfig {
  Scheme scheme = Scheme::oma;
  double c_t_sq = 0.6;         // power allocation, user T
  double c_r_sq = 0.4;         // power allocation, user R (NOMA: < c_t_sq)
  double rate_t = 1.0;         // target rate, bits/s/Hz
  double rate_r = 1.0;
  double noise_power = 1.0;    // sigma_0^2, linear
  double p_bs = 1.0;           // transmit power, linear

  void check() const;  // throws std::invalid_argument
};

/// Channel-gain thresholds: outage for user chi iff |H_chi|^2 < tau_chi/P.
/// For NOMA, feasible_t is false when the target rate of user T exceeds the
/// interference-limited ceiling, in which case tau_t = tau_r = +inf and the
/// outage probability is 1 by convention.
struct Thresholds {
  double tau_t = 0.0;
  double tau_r = 0.0;
  bool feasible_t = true;
};

/// H_chi = sum_m beta_m |g_m||h_m| exp{j(angle g_m + angle h_m + phi_m)} + h_d,
/// the surface sum accumulated pairwise for deterministic, well-conditioned
/// rounding. Throws std::invalid_argument on dimension mismatch.
std::complex<double> end_to_end(const channel::ChannelRealization& ch,
                                const surface::SurfaceCoefficients& c, User user);

/// Surface-only part of the sum (direct link excluded).
std::complex<double> surface_sum(const channel::ChannelRealization& ch,
                                 const surface::SurfaceCoefficients& c, User user);

/// (1/2) log2(1 + P c^2 |H|^2 / (sigma^2/2)): half band, half noise.
double oma_rate(std::complex<double> h, User user, const MaConfig& m);

struct NomaRates {
  double r_rt;  // user R decoding the message of user T
  double r_rr;  // user R decoding its own message after cancellation
  double r_tt;  // user T decoding its own message under interference
};

/// The three NOMA SINR rates. Requires c_r_sq < c_t_sq.
NomaRates noma_rates(std::complex<double> h_t, std::complex<double> h_r, const MaConfig& m);

Thresholds thresholds(const MaConfig& m);

/// 1 iff |H|^2 < tau / P (strict inequality).
bool outage_event(std::complex<double> h, double tau, double p_bs);

/// Same event for an explicit channel power gain.
bool outage_event_gain(double gain_sq, double tau, double p_bs);

}  // namespace starsim::link
