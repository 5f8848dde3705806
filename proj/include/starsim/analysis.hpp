// SPDX-License-Identifier: Apache-2.0
//
// Closed-form predictions: high-SNR outage asymptotes, outage upper bounds,
// moment-matched amplitude PDFs, diversity orders, and received-power
// scaling laws for every configuration strategy.

#pragma once

#include <optional>

#include "starsim/channel.hpp"
#include "starsim/psc.hpp"

namespace starsim::analysis {

/// Outage-probability prediction. `raw` is the unclamped formula value
/// (may overflow to +inf for large surfaces at low power; `log_raw` is
/// always finite in that regime); `value` is clamped to [0,1]. Asymptotes
/// are meaningful only where the raw value is small (reporting convention:
/// raw < 0.1).
struct OutageValue {
  double value = 0.0;
  double raw = 0.0;
  double log_raw = -std::numeric_limits<double>::infinity();
  bool clamped() const { return raw > 1.0; }
  bool asymptote_valid() const { return raw < 0.1; }
};

/// Scalar link statistics consumed by the closed forms. Omegas are the
/// distance-scaled scale parameters (E|h|^2 including path loss).
struct LinkStats {
  double k;      // Rician factor, linear
  double omega;  // E|h|^2

  static LinkStats of(const channel::RicianParams& p) {
    return {p.k_factor, p.effective_omega()};
  }
};

/// High-SNR outage asymptote of the exactly cophased user: the surface sum
/// of m cascaded products plus the direct link, all phase aligned. Evaluated
/// in log space (factorials up to (2m+2)! appear).
OutageValue ps_primary_outage_asymptote(const LinkStats& h, const LinkStats& g,
                                        const LinkStats& direct, int m, double beta_r,
                                        double tau, double p_bs);

/// The asymptotic amplitude PDF behind ps_primary_outage_asymptote:
///   f(x) = c * x^{2m+1} / (2m+1)!   near the origin,
/// exposed so the asymptote can be cross-checked by quadrature.
double ps_primary_asymptotic_pdf(double x, const LinkStats& h, const LinkStats& g,
                                 const LinkStats& direct, int m, double beta_r);

/// Outage upper bound for the symmetric-error strategy: the event that the
/// aligned sum is small forces every cascaded product and the direct link
/// to be small individually. F(.) is computed by quadrature of the product
/// PDF; pass direct = nullopt when the direct link is blocked.
double dp_outage_upper_bound(const channel::RicianParams& p_h, const channel::RicianParams& p_g,
                             const std::optional<LinkStats>& direct, int m, double tau,
                             double p_bs);

/// Group-strategy asymptote: the cophased-user asymptote with m -> m_chi and
/// full amplitude on the serving side.
OutageValue tr_outage_asymptote(const LinkStats& h, const LinkStats& g, const LinkStats& direct,
                                int m_chi, double tau, double p_bs);

/// The group-strategy formula exactly as printed (inconsistent beta exponent
/// and a free shape constant k_s), kept for comparison.
OutageValue tr_outage_asymptote_literal(const LinkStats& h, const LinkStats& direct, int m_chi,
                                        double beta_r, double k_s, double tau, double p_bs);

/// Random-configuration outage: product of the Rayleigh tail of the surface
/// sum (scale omega_r) and the Rician tail of the direct link. Pass
/// direct = nullopt when blocked (Rayleigh factor alone).
double random_outage_bound(double omega_r, const std::optional<LinkStats>& direct, double tau,
                           double p_bs);

/// High-SNR log-log outage slope magnitude per strategy and user.
/// m_t/m_r are the group sizes (tr only).
double diversity_order(psc::Kind kind, User user, User primary_user, int m, int m_r, int m_t,
                       bool direct_present);

/// Moment-matched Rician approximation of the surface-sum amplitude when
/// per-element phase errors span a sector of width delta:
///   alpha  = m * mu_term * sinc(delta/2)
///   beta^2 = (m/2) * omega_term * (1 - sinc(delta))
/// mu_term / omega_term are the first/second moments of one full summand
/// (amplitude split and both fading legs included). delta <= 0 degenerates
/// to a point mass at alpha (flagged, never divides by zero).
struct RicianApprox {
  double alpha_shape = 0.0;
  double beta_shape_sq = 0.0;
  bool degenerate = false;

  /// Density of the approximation at x >= 0.
  double pdf(double x) const;
};

RicianApprox rician_sum_approx(double delta, double m, double mu_term, double omega_term);

/// Mean received power E|H|^2 at unit transmit power.
///   ps        primary/secondary laws (is_primary selects)
///   dp        symmetric law, both users
///   tr        pass m = group size and beta = 1
///   random    linear law; pass g_mag = sqrt(E|g|^2) (the incoherent sum
///             scales with second moments); coherent strategies take
///             g_mag = E|g|
/// direct = nullptr when the direct link is blocked.
double power_scaling(psc::Kind kind, bool is_primary, double m, const channel::Moments& h,
                     double g_mag, double beta, const channel::Moments* direct);

}  // namespace starsim::analysis
