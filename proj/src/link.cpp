// SPDX-License-Identifier: Apache-2.0

#include "starsim/link.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace starsim::link {

namespace {

double log2_1p(double x) { return std::log1p(x) / 0.69314718055994530942; }

std::complex<double> pairwise_sum(std::vector<std::complex<double>>& v, std::size_t lo,
                                  std::size_t hi) {
  if (hi - lo <= 4) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

void MaConfig::check() const {
  if (!(c_t_sq > 0.0) || !(c_r_sq > 0.0) || c_t_sq + c_r_sq > 1.0 + 1e-12) {
    throw std::invalid_argument("MaConfig: need c_t_sq, c_r_sq > 0 and c_t_sq + c_r_sq <= 1");
  }
  if (scheme == Scheme::noma && !(c_r_sq < c_t_sq)) {
    throw std::invalid_argument("MaConfig: NOMA requires c_r_sq < c_t_sq");
  }
  if (!(rate_t >= 0.0) || !(rate_r >= 0.0)) {
    throw std::invalid_argument("MaConfig: target rates must be >= 0");
  }
  if (!(noise_power > 0.0) || !(p_bs > 0.0)) {
    throw std::invalid_argument("MaConfig: noise_power and p_bs must be > 0");
  }
}

std::complex<double> surface_sum(const channel::ChannelRealization& ch,
                                 const surface::SurfaceCoefficients& c, User user) {
  const Eigen::Index m = ch.elements();
  if (c.size() != m || ch.h_t.size() != m || ch.h_r.size() != m) {
    throw std::invalid_argument("surface_sum: dimension mismatch");
  }
  const Eigen::ArrayXcd& h = ch.h(user);
  const Eigen::ArrayXd& beta = (user == User::T) ? c.beta_t : c.beta_r;
  const Eigen::ArrayXd& phi = (user == User::T) ? c.phi_t : c.phi_r;
  std::vector<std::complex<double>> terms(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double amp = beta[i] * std::abs(ch.g[i]) * std::abs(h[i]);
    const double ang = std::arg(ch.g[i]) + std::arg(h[i]) + phi[i];
    terms[static_cast<std::size_t>(i)] = {amp * std::cos(ang), amp * std::sin(ang)};
  }
  if (terms.empty()) return {0.0, 0.0};
  return pairwise_sum(terms, 0, terms.size());
}

std::complex<double> end_to_end(const channel::ChannelRealization& ch,
                                const surface::SurfaceCoefficients& c, User user) {
  return surface_sum(ch, c, user) + ch.h_d(user);
}

double oma_rate(std::complex<double> h, User user, const MaConfig& m) {
  m.check();
  const double csq = (user == User::T) ? m.c_t_sq : m.c_r_sq;
  const double snr = m.p_bs * csq * std::norm(h) / (0.5 * m.noise_power);
  return 0.5 * log2_1p(snr);
}

NomaRates noma_rates(std::complex<double> h_t, std::complex<double> h_r, const MaConfig& m) {
  if (!(m.c_r_sq < m.c_t_sq)) {
    throw std::invalid_argument("noma_rates: requires c_r_sq < c_t_sq");
  }
  m.check();
  const double gr = m.p_bs * std::norm(h_r) / m.noise_power;
  const double gt = m.p_bs * std::norm(h_t) / m.noise_power;
  NomaRates r;
  r.r_rt = log2_1p(m.c_t_sq * gr / (m.c_r_sq * gr + 1.0));
  r.r_rr = log2_1p(m.c_r_sq * gr);
  r.r_tt = log2_1p(m.c_t_sq * gt / (m.c_r_sq * gt + 1.0));
  return r;
}

Thresholds thresholds(const MaConfig& m) {
  m.check();
  Thresholds t;
  if (m.scheme == Scheme::oma) {
    t.tau_t = (std::exp2(2.0 * m.rate_t) - 1.0) * m.noise_power / (2.0 * m.c_t_sq);
    t.tau_r = (std::exp2(2.0 * m.rate_r) - 1.0) * m.noise_power / (2.0 * m.c_r_sq);
    return t;
  }
  const double u_t = std::exp2(m.rate_t) - 1.0;
  const double u_r = std::exp2(m.rate_r) - 1.0;
  const double denom = m.c_t_sq - u_t * m.c_r_sq;
  if (denom <= 0.0) {
    // Target rate of user T exceeds the interference-limited ceiling:
    // deterministic outage for both SIC stages.
    t.feasible_t = false;
    t.tau_t = std::numeric_limits<double>::infinity();
    t.tau_r = std::numeric_limits<double>::infinity();
    return t;
  }
  t.tau_t = u_t * m.noise_power / denom;
  t.tau_r = std::max(t.tau_t, u_r * m.noise_power / m.c_r_sq);
  return t;
}

bool outage_event(std::complex<double> h, double tau, double p_bs) {
  return outage_event_gain(std::norm(h), tau, p_bs);
}

bool outage_event_gain(double gain_sq, double tau, double p_bs) {
  if (!(tau >= 0.0)) throw std::invalid_argument("outage_event: tau must be >= 0");
  if (!(p_bs > 0.0)) throw std::invalid_argument("outage_event: p_bs must be > 0");
  return gain_sq < tau / p_bs;
}

}  // namespace starsim::link
