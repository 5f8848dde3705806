// SPDX-License-Identifier: Apache-2.0

#include "starsim/surface.hpp"

#include <cmath>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace starsim::surface {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAmpTol = 1e-12;
constexpr double kPhaseTol = 1e-9;
}  // namespace

double wrap_two_pi(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w < kTwoPi ? w : 0.0;
}

double wrap_pm_pi(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w > kPi) w -= kTwoPi;
  if (w <= -kPi) w += kTwoPi;
  return w;
}

void SurfaceGeometry::check() const {
  if (m_h < 1 || m_v < 1) throw std::invalid_argument("SurfaceGeometry: m_h, m_v >= 1");
  if (!(spacing_wavelengths > 0.0)) {
    throw std::invalid_argument("SurfaceGeometry: spacing must be > 0");
  }
}

ValidationReport validate(const SurfaceCoefficients& c, CouplingMode mode) {
  const Eigen::Index m = c.beta_t.size();
  if (c.beta_r.size() != m || c.phi_t.size() != m || c.phi_r.size() != m ||
      static_cast<Eigen::Index>(c.nu.size()) != m) {
    throw std::invalid_argument("validate: coefficient vectors have mismatched lengths");
  }

  ValidationReport report;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double bt = c.beta_t[i];
    const double br = c.beta_r[i];
    if (bt < -kAmpTol || bt > 1.0 + kAmpTol || br < -kAmpTol || br > 1.0 + kAmpTol) {
      report.violations.push_back({i, Violation::Kind::amplitude_range, std::min(bt, br)});
      continue;
    }
    const double energy = bt * bt + br * br;
    if (std::abs(energy - 1.0) > kAmpTol) {
      report.violations.push_back({i, Violation::Kind::amplitude_energy, energy - 1.0});
    }
    if (mode == CouplingMode::independent) continue;
    if (br * bt <= 0.0) continue;  // coupling binds only when both sides radiate
    const double diff = wrap_two_pi(c.phi_r[i] - c.phi_t[i]);
    const double r0 = std::abs(diff - 0.5 * kPi);
    const double r1 = std::abs(diff - 1.5 * kPi);
    if (std::min(r0, r1) > kPhaseTol) {
      report.violations.push_back({i, Violation::Kind::phase_coupling, diff});
      continue;
    }
    const std::uint8_t expected = (r0 <= r1) ? 0 : 1;
    if (c.nu[i] != expected) {
      report.violations.push_back({i, Violation::Kind::nu_mismatch, static_cast<double>(c.nu[i])});
    }
  }
  return report;
}

Eigen::Matrix3Xd element_positions(const SurfaceGeometry& g, double wavelength_m) {
  g.check();
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("element_positions: wavelength > 0");
  const double pitch = g.spacing_wavelengths * wavelength_m;
  Eigen::Matrix3Xd pos(3, g.elements());
  const double y0 = 0.5 * (g.m_h - 1);
  const double z0 = 0.5 * (g.m_v - 1);
  Eigen::Index m = 0;
  for (int j = 0; j < g.m_v; ++j) {
    for (int i = 0; i < g.m_h; ++i, ++m) {
      pos(0, m) = 0.0;
      pos(1, m) = (i - y0) * pitch;
      pos(2, m) = (j - z0) * pitch;
    }
  }
  return pos;
}

void write_coefficients_csv(std::ostream& os, const SurfaceCoefficients& c) {
  os << "m,beta_t,beta_r,phi_t,phi_r,nu\n";
  char buf[192];
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g,%.12g,%.12g,%d\n",
                  static_cast<long long>(i + 1), c.beta_t[i], c.beta_r[i], c.phi_t[i],
                  c.phi_r[i], static_cast<int>(c.nu[i]));
    os << buf;
  }
}

SurfaceCoefficients read_coefficients_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("coefficients csv: empty input");
  std::vector<std::array<double, 5>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::array<double, 6> v{};
    char comma;
    for (int k = 0; k < 6; ++k) {
      if (!(ls >> v[k])) throw std::invalid_argument("coefficients csv: bad row: " + line);
      if (k < 5 && !(ls >> comma)) throw std::invalid_argument("coefficients csv: bad row: " + line);
    }
    rows.push_back({v[1], v[2], v[3], v[4], v[5]});
  }
  SurfaceCoefficients c;
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  c.beta_t.resize(m);
  c.beta_r.resize(m);
  c.phi_t.resize(m);
  c.phi_r.resize(m);
  c.nu.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c.beta_t[i] = rows[i][0];
    c.beta_r[i] = rows[i][1];
    c.phi_t[i] = rows[i][2];
    c.phi_r[i] = rows[i][3];
    c.nu[i] = static_cast<std::uint8_t>(rows[i][4]);
  }
  return c;
}

}  // namespace starsim::surface
