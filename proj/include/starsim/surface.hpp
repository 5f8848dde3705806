// SPDX-License-Identifier: Apache-2.0
//
// Surface element model: amplitude/phase coefficient storage, validation of
// the passive-lossless coupling constraints
//   beta_t^2 + beta_r^2 = 1
//   phi_r - phi_t in {pi/2, 3pi/2}   (whenever both amplitudes are nonzero)
// and planar-array geometry.
//
// Geometry convention: elements lie in the y-z plane centered at the origin.
// The +x axis is the surface normal pointing into the transmission
// half-space; azimuth angles are measured from +x in the x-y plane, so the
// reflection half-space is cos(angle) < 0 and the 90/270 degree boundary
// belongs to the reflection side.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace starsim::surface {

/// Wrap an angle to [0, 2*pi).
double wrap_two_pi(double phi);

/// Wrap an angle to (-pi, pi].
double wrap_pm_pi(double phi);

struct SurfaceGeometry {
  int m_h = 1;                       // elements along the horizontal axis
  int m_v = 1;                       // elements along the vertical axis
  double spacing_wavelengths = 0.5;  // element pitch in carrier wavelengths

  int elements() const { return m_h * m_v; }
  void check() const;  // throws std::invalid_argument
};

/// Per-element transmission/reflection amplitudes, phase shifts (stored in
/// [0, 2*pi)) and the auxiliary bit selecting between the two admissible
/// phase differences. Immutable value type.
struct SurfaceCoefficients {
  Eigen::ArrayXd beta_t;
  Eigen::ArrayXd beta_r;
  Eigen::ArrayXd phi_t;
  Eigen::ArrayXd phi_r;
  std::vector<std::uint8_t> nu;

  Eigen::Index size() const { return beta_t.size(); }
};

enum class CouplingMode {
  constrained,  // energy conservation + phase coupling
  independent   // energy conservation only
};

struct Violation {
  enum class Kind { amplitude_energy, amplitude_range, phase_coupling, nu_mismatch };
  Eigen::Index index;
  Kind kind;
  double value;  // measured residual / offending value
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every element against the selected constraint set and reports all
/// violating indices. Amplitude tolerance 1e-12, phase tolerance 1e-9; the
/// phase coupling binds only where beta_r * beta_t > 0. Throws
/// std::invalid_argument on mismatched vector lengths.
ValidationReport validate(const SurfaceCoefficients& c, CouplingMode mode);

/// Element center positions (meters), one column per element, row-major
/// over the grid (horizontal index fastest). Centroid at the origin.
Eigen::Matrix3Xd element_positions(const SurfaceGeometry& g, double wavelength_m);

/// Coefficient interchange format: CSV with header
/// m,beta_t,beta_r,phi_t,phi_r,nu, phases in radians, 12 significant digits.
void write_coefficients_csv(std::ostream& os, const SurfaceCoefficients& c);
SurfaceCoefficients read_coefficients_csv(std::istream& is);

}  // namespace starsim::surface
