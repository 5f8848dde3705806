// SPDX-License-Identifier: Apache-2.0

#include "starsim/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "starsim/specfun.hpp"

namespace starsim::analysis {

namespace {

constexpr double kPi = 3.14159265358979323846;

OutageValue from_log(double log_raw) {
  OutageValue v;
  v.log_raw = log_raw;
  v.raw = std::exp(log_raw);
  v.value = std::min(1.0, std::max(0.0, v.raw));
  return v;
}

double direct_tail(const LinkStats& d, double tau, double p_bs) {
  // Pr{ |h_d|^2 < tau / P } for a Rician direct link; the complement form
  // keeps relative accuracy deep in the tail.
  const double b = std::sqrt(2.0 * tau * (d.k + 1.0) / (d.omega * p_bs));
  return specfun::marcum_q1_complement(std::sqrt(2.0 * d.k), b);
}

}  // namespace

OutageValue ps_primary_outage_asymptote(const LinkStats& h, const LinkStats& g,
                                        const LinkStats& direct, int m, double beta_r,
                                        double tau, double p_bs) {
  if (m < 0) throw std::invalid_argument("ps_primary_outage_asymptote: m >= 0");
  if (!(beta_r > 0.0)) throw std::invalid_argument("ps_primary_outage_asymptote: beta_r > 0");
  if (tau == 0.0) return {};
  if (std::isinf(tau)) return from_log(std::numeric_limits<double>::infinity());
  const double md = m;
  const double log_raw = (md + 1.0) * std::log(2.0) + md * std::log(h.k + 1.0) +
                         md * std::log(g.k + 1.0) + std::log(direct.k + 1.0) -
                         std::lgamma(2.0 * md + 3.0) - md * std::log(h.omega) -
                         md * std::log(g.omega) - std::log(direct.omega) -
                         2.0 * md * std::log(beta_r) - md * (h.k + g.k) - direct.k +
                         (md + 1.0) * (std::log(tau) - std::log(p_bs));
  return from_log(log_raw);
}

double ps_primary_asymptotic_pdf(double x, const LinkStats& h, const LinkStats& g,
                                 const LinkStats& direct, int m, double beta_r) {
  if (x <= 0.0) return 0.0;
  const double md = m;
  const double log_c = (md + 1.0) * std::log(2.0) + md * std::log(h.k + 1.0) +
                       md * std::log(g.k + 1.0) + std::log(direct.k + 1.0) -
                       2.0 * md * std::log(beta_r) - md * std::log(h.omega) -
                       md * std::log(g.omega) - std::log(direct.omega) - md * (h.k + g.k) -
                       direct.k - std::lgamma(2.0 * md + 2.0);
  return std::exp(log_c + (2.0 * md + 1.0) * std::log(x));
}

double dp_outage_upper_bound(const channel::RicianParams& p_h, const channel::RicianParams& p_g,
                             const std::optional<LinkStats>& direct, int m, double tau,
                             double p_bs) {
  if (m < 0) throw std::invalid_argument("dp_outage_upper_bound: m >= 0");
  if (tau == 0.0) return 0.0;
  if (std::isinf(tau)) return 1.0;
  const double t = std::sqrt(tau / p_bs);
  const double f = channel::cascaded_cdf(t, p_h, p_g, 1.0);
  const double d = direct ? direct_tail(*direct, tau, p_bs) : 1.0;
  return std::pow(f, m) * d;
}

OutageValue tr_outage_asymptote(const LinkStats& h, const LinkStats& g, const LinkStats& direct,
                                int m_chi, double tau, double p_bs) {
  return ps_primary_outage_asymptote(h, g, direct, m_chi, 1.0, tau, p_bs);
}

OutageValue tr_outage_asymptote_literal(const LinkStats& h, const LinkStats& direct, int m_chi,
                                        double beta_r, double k_s, double tau, double p_bs) {
  if (tau == 0.0) return {};
  if (std::isinf(tau)) return from_log(std::numeric_limits<double>::infinity());
  const double md = m_chi;
  const double log_raw = (md + 1.0) * std::log(2.0) + md * std::log(h.k + 1.0) +
                         std::log(direct.k + 1.0) - std::lgamma(2.0 * md + 3.0) -
                         md * std::log(h.omega) - std::log(direct.omega) -
                         0.5 * md * std::log(beta_r) - md * k_s - direct.k +
                         (md + 1.0) * (std::log(tau) - std::log(p_bs));
  return from_log(log_raw);
}

double random_outage_bound(double omega_r, const std::optional<LinkStats>& direct, double tau,
                           double p_bs) {
  if (!(omega_r > 0.0)) throw std::invalid_argument("random_outage_bound: omega_r > 0");
  if (tau == 0.0) return 0.0;
  if (std::isinf(tau)) return 1.0;
  const double f1 = -std::expm1(-tau / (omega_r * p_bs));
  const double f2 = direct ? direct_tail(*direct, tau, p_bs) : 1.0;
  return f1 * f2;
}

double diversity_order(psc::Kind kind, User user, User primary_user, int m, int m_r, int m_t,
                       bool direct_present) {
  const double d = direct_present ? 1.0 : 0.0;
  switch (kind) {
    case psc::Kind::ps:
      if (user == primary_user) return m + d;
      return direct_present ? 0.5 * (m + 3.0) : 0.5 * (m + 1.0);
    case psc::Kind::dp:
      return m + d;
    case psc::Kind::tr:
      return (user == User::T ? m_t : m_r) + d;
    case psc::Kind::random:
      return 1.0 + d;
    case psc::Kind::independent:
      return m + d;
  }
  throw std::invalid_argument("diversity_order: unknown strategy");
}

double RicianApprox::pdf(double x) const {
  if (degenerate || x <= 0.0) return 0.0;
  const double v = beta_shape_sq;
  const double z = x * alpha_shape / v;
  const double log_f = std::log(x / v) - (x - alpha_shape) * (x - alpha_shape) / (2.0 * v) +
                       std::log(specfun::bessel_i0_scaled(z));
  return std::exp(log_f);
}

RicianApprox rician_sum_approx(double delta, double m, double mu_term, double omega_term) {
  if (delta > kPi + 1e-12) {
    throw std::invalid_argument("rician_sum_approx: delta must lie in (0, pi]");
  }
  RicianApprox a;
  if (delta <= 0.0) {
    a.degenerate = true;
    a.alpha_shape = m * mu_term;
    a.beta_shape_sq = 0.0;
    return a;
  }
  a.alpha_shape = m * mu_term * specfun::sinc_u(0.5 * delta);
  a.beta_shape_sq = 0.5 * m * omega_term * (1.0 - specfun::sinc_u(delta));
  return a;
}

double power_scaling(psc::Kind kind, bool is_primary, double m, const channel::Moments& h,
                     double g_mag, double beta, const channel::Moments* direct) {
  const double mu_d = direct ? direct->mu : 0.0;
  const double om_d = direct ? direct->omega : 0.0;
  const double coh = h.mu * g_mag * beta;          // one summand's mean amplitude
  const double lin = h.var * g_mag * g_mag * beta * beta;
  switch (kind) {
    case psc::Kind::ps:
      if (is_primary) {
        return m * m * coh * coh + m * (lin + 2.0 * coh * mu_d) + om_d;
      }
      return 4.0 / (kPi * kPi) * m * m * coh * coh + m * (lin + 2.0 * coh * mu_d) + om_d;
    case psc::Kind::dp:
      return 8.0 / (kPi * kPi) * m * m * coh * coh + (1.0 - 2.0 / kPi) * m * lin + om_d;
    case psc::Kind::tr:
      return m * m * coh * coh + m * (lin + 2.0 * coh * mu_d) + om_d;
    case psc::Kind::random:
      return m * g_mag * g_mag * beta * beta * h.omega + om_d;
    case psc::Kind::independent:
      return m * m * coh * coh + m * (lin + 2.0 * coh * mu_d) + om_d;
  }
  throw std::invalid_argument("power_scaling: unknown strategy");
}

}  // namespace starsim::analysis
