#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "starsim/rng.hpp"
#include "starsim/surface.hpp"

using namespace starsim::surface;

namespace {
constexpr double kPi = 3.14159265358979323846;

SurfaceCoefficients uniform_coeffs(Eigen::Index m, double beta_r, double phi_t, double diff,
                                   std::uint8_t nu) {
  SurfaceCoefficients c;
  c.beta_r = Eigen::ArrayXd::Constant(m, beta_r);
  c.beta_t = Eigen::ArrayXd::Constant(m, std::sqrt(1.0 - beta_r * beta_r));
  c.phi_t = Eigen::ArrayXd::Constant(m, phi_t);
  c.phi_r = Eigen::ArrayXd::Constant(m, wrap_two_pi(phi_t + diff));
  c.nu.assign(m, nu);
  return c;
}
}  // namespace

TEST_CASE("wrap helpers") {
  CHECK(wrap_two_pi(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_two_pi(-0.1) == doctest::Approx(2.0 * kPi - 0.1));
  CHECK(wrap_pm_pi(kPi) == doctest::Approx(kPi));
  CHECK(wrap_pm_pi(kPi + 0.2) == doctest::Approx(-kPi + 0.2));
  CHECK(wrap_pm_pi(-3.0 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("validate accepts the exact constraint point") {
  const auto c = uniform_coeffs(4, 1.0 / std::sqrt(2.0), 0.3, kPi / 2.0, 0);
  CHECK(validate(c, CouplingMode::constrained).ok());
  const auto c2 = uniform_coeffs(4, 1.0 / std::sqrt(2.0), 1.2, 3.0 * kPi / 2.0, 1);
  CHECK(validate(c2, CouplingMode::constrained).ok());
}

TEST_CASE("validate rejects a pi phase difference and a broken energy split") {
  // beta_r = 0.8, beta_t = 0.6 satisfies the energy law; diff = pi violates the
  // coupling.
  SurfaceCoefficients c;
  c.beta_r = Eigen::ArrayXd::Constant(3, 0.8);
  c.beta_t = Eigen::ArrayXd::Constant(3, 0.6);
  c.phi_t = Eigen::ArrayXd::Constant(3, 0.0);
  c.phi_r = Eigen::ArrayXd::Constant(3, kPi);
  c.nu.assign(3, 0);
  const auto report = validate(c, CouplingMode::constrained);
  CHECK_FALSE(report.ok());
  CHECK(report.violations.size() == 3);
  for (const auto& v : report.violations) {
    CHECK(v.kind == Violation::Kind::phase_coupling);
  }
  // Independent mode only enforces the energy law.
  CHECK(validate(c, CouplingMode::independent).ok());

  c.beta_t = Eigen::ArrayXd::Constant(3, 0.7);  // 0.49 + 0.64 != 1
  const auto report2 = validate(c, CouplingMode::independent);
  CHECK(report2.violations.size() == 3);
  CHECK(report2.violations[0].kind == Violation::Kind::amplitude_energy);
}

TEST_CASE("validate: coupling is vacuous when one amplitude is zero") {
  SurfaceCoefficients c;
  c.beta_r = Eigen::ArrayXd::Constant(2, 1.0);
  c.beta_t = Eigen::ArrayXd::Constant(2, 0.0);
  c.phi_t = Eigen::ArrayXd::Constant(2, 0.0);
  c.phi_r = Eigen::ArrayXd::Constant(2, kPi);  // would violate the coupling if it applied
  c.nu.assign(2, 0);
  CHECK(validate(c, CouplingMode::constrained).ok());
}

TEST_CASE("validate reports every violating index and flags nu mismatches") {
  auto c = uniform_coeffs(5, 0.5, 0.1, kPi / 2.0, 0);
  c.phi_r[2] = wrap_two_pi(c.phi_t[2] + 0.7);  // one bad coupling
  c.nu[4] = 1;                                 // inconsistent auxiliary bit
  const auto report = validate(c, CouplingMode::constrained);
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0].index == 2);
  CHECK(report.violations[0].kind == Violation::Kind::phase_coupling);
  CHECK(report.violations[1].index == 4);
  CHECK(report.violations[1].kind == Violation::Kind::nu_mismatch);
}

TEST_CASE("validate rejects mismatched lengths") {
  auto c = uniform_coeffs(3, 0.5, 0.0, kPi / 2.0, 0);
  c.nu.resize(2);
  CHECK_THROWS_AS(validate(c, CouplingMode::constrained), std::invalid_argument);
}

TEST_CASE("element positions: single element at the origin") {
  SurfaceGeometry g;
  const Eigen::Matrix3Xd pos = element_positions(g, 0.1);
  REQUIRE(pos.cols() == 1);
  CHECK(pos.col(0).norm() == 0.0);
}

TEST_CASE("element positions: two-element row at +-0.5 m for a 2 m wavelength") {
  SurfaceGeometry g;
  g.m_h = 2;
  g.m_v = 1;
  g.spacing_wavelengths = 0.5;
  const Eigen::Matrix3Xd pos = element_positions(g, 2.0);
  REQUIRE(pos.cols() == 2);
  CHECK(pos(1, 0) == doctest::Approx(-0.5));
  CHECK(pos(1, 1) == doctest::Approx(0.5));
  CHECK(pos(0, 0) == 0.0);
  CHECK(pos(2, 0) == 0.0);
}

TEST_CASE("element positions: 18x18 grid extent and centering") {
  SurfaceGeometry g;
  g.m_h = 18;
  g.m_v = 18;
  const double lambda = 0.1;
  const Eigen::Matrix3Xd pos = element_positions(g, lambda);
  REQUIRE(pos.cols() == 324);
  CHECK(pos.row(1).maxCoeff() - pos.row(1).minCoeff() ==
        doctest::Approx(17.0 * lambda / 2.0).epsilon(1e-12));
  CHECK(std::abs(pos.row(1).mean()) < 1e-12);
  CHECK(std::abs(pos.row(2).mean()) < 1e-12);
}

TEST_CASE("coefficient csv round trip") {
  starsim::rng::Stream s(9, 1);
  const Eigen::Index m = 17;
  SurfaceCoefficients c;
  c.beta_r.resize(m);
  c.beta_t.resize(m);
  c.phi_t.resize(m);
  c.phi_r.resize(m);
  c.nu.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double br = s.next_double();
    c.beta_r[i] = br;
    c.beta_t[i] = std::sqrt(1.0 - br * br);
    c.phi_t[i] = s.angle();
    c.phi_r[i] = s.angle();
    c.nu[i] = s.coin() ? 1 : 0;
  }
  std::stringstream ss;
  write_coefficients_csv(ss, c);
  const SurfaceCoefficients back = read_coefficients_csv(ss);
  REQUIRE(back.size() == m);
  for (Eigen::Index i = 0; i < m; ++i) {
    CHECK(back.beta_r[i] == doctest::Approx(c.beta_r[i]).epsilon(1e-11));
    CHECK(back.beta_t[i] == doctest::Approx(c.beta_t[i]).epsilon(1e-11));
    CHECK(back.phi_t[i] == doctest::Approx(c.phi_t[i]).epsilon(1e-11));
    CHECK(back.phi_r[i] == doctest::Approx(c.phi_r[i]).epsilon(1e-11));
    CHECK(back.nu[i] == c.nu[i]);
  }
}
