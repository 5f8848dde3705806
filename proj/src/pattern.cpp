// SPDX-License-Identifier: Apache-2.0

#include "starsim/pattern.hpp"

#include <cmath>
#include <stdexcept>

namespace starsim::pattern {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector3d on_circle(double angle_deg, double radius) {
  const double a = angle_deg * kPi / 180.0;
  return {radius * std::cos(a), radius * std::sin(a), 0.0};
}

bool reflection_side(double angle_deg) {
  const double a = angle_deg * kPi / 180.0;
  return std::cos(a) <= 1e-12;  // boundary angles belong to the reflection side
}

}  // namespace

void PatternConfig::check() const {
  geometry.check();
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("PatternConfig: wavelength > 0");
  if (!(bs_distance_m > 0.0) || !(eval_radius_m > 0.0)) {
    throw std::invalid_argument("PatternConfig: distances must be > 0");
  }
  if (angle_grid_deg.empty()) throw std::invalid_argument("PatternConfig: empty angle grid");
  for (std::size_t i = 1; i < angle_grid_deg.size(); ++i) {
    if (angle_grid_deg[i] < angle_grid_deg[i - 1]) {
      throw std::invalid_argument("PatternConfig: angle grid must be sorted");
    }
  }
}

std::vector<double> angle_grid(double step_deg) {
  if (!(step_deg > 0.0)) throw std::invalid_argument("angle_grid: step must be > 0");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(360.0 / step_deg) + 1);
  for (double a = 0.0; a < 360.0 - 1e-9; a += step_deg) grid.push_back(a);
  return grid;
}

Pattern compute_pattern(const PatternConfig& cfg, const surface::SurfaceCoefficients& coeffs) {
  cfg.check();
  const Eigen::Matrix3Xd pos = surface::element_positions(cfg.geometry, cfg.wavelength_m);
  if (coeffs.size() != pos.cols()) {
    throw std::invalid_argument("compute_pattern: coefficient count != element count");
  }
  const double k_wave = 2.0 * kPi / cfg.wavelength_m;
  const Eigen::Vector3d bs = on_circle(cfg.bs_angle_deg, cfg.bs_distance_m);

  // Incident spherical wave, fixed per element.
  const Eigen::Index m = pos.cols();
  Eigen::ArrayXcd incident(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d_in = (pos.col(i) - bs).norm();
    incident[i] = std::polar(1.0 / d_in, -k_wave * d_in);
  }

  Pattern out;
  out.angle_deg = cfg.angle_grid_deg;
  out.power_db.resize(out.angle_deg.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < out.angle_deg.size(); ++a) {
    const double angle = out.angle_deg[a];
    const bool refl = reflection_side(angle);
    const Eigen::Vector3d eval = on_circle(angle, cfg.eval_radius_m);
    std::complex<double> field{0.0, 0.0};
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d_out = (pos.col(i) - eval).norm();
      const double beta = refl ? coeffs.beta_r[i] : coeffs.beta_t[i];
      const double phi = refl ? coeffs.phi_r[i] : coeffs.phi_t[i];
      field += incident[i] * std::polar(beta / d_out, phi - k_wave * d_out);
    }
    const double db = 20.0 * std::log10(std::max(std::abs(field), 1e-300));
    out.power_db[a] = db;
    peak = std::max(peak, db);
  }
  if (cfg.normalize_to_peak) {
    for (double& v : out.power_db) v -= peak;
  }
  return out;
}

channel::ChannelRealization los_realization(const PatternConfig& cfg, double user_t_angle_deg,
                                            double user_t_distance_m, double user_r_angle_deg,
                                            double user_r_distance_m, bool direct_links) {
  cfg.geometry.check();
  const Eigen::Matrix3Xd pos = surface::element_positions(cfg.geometry, cfg.wavelength_m);
  const double k_wave = 2.0 * kPi / cfg.wavelength_m;
  const Eigen::Vector3d bs = on_circle(cfg.bs_angle_deg, cfg.bs_distance_m);
  const Eigen::Vector3d ut = on_circle(user_t_angle_deg, user_t_distance_m);
  const Eigen::Vector3d ur = on_circle(user_r_angle_deg, user_r_distance_m);

  const Eigen::Index m = pos.cols();
  channel::ChannelRealization real;
  real.g.resize(m);
  real.h_t.resize(m);
  real.h_r.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d_g = (pos.col(i) - bs).norm();
    const double d_t = (pos.col(i) - ut).norm();
    const double d_r = (pos.col(i) - ur).norm();
    real.g[i] = std::polar(1.0 / d_g, -k_wave * d_g);
    real.h_t[i] = std::polar(1.0 / d_t, -k_wave * d_t);
    real.h_r[i] = std::polar(1.0 / d_r, -k_wave * d_r);
  }
  if (direct_links) {
    const double d_bt = (bs - ut).norm();
    const double d_br = (bs - ur).norm();
    real.h_d_t = std::polar(1.0 / d_bt, -k_wave * d_bt);
    real.h_d_r = std::polar(1.0 / d_br, -k_wave * d_br);
  }
  return real;
}

}  // namespace starsim::pattern
