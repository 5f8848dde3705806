#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "starsim/analysis.hpp"
#include "starsim/montecarlo.hpp"

using namespace starsim;
using mc::TrialModel;

namespace {

channel::RicianParams unit_params(double k) {
  channel::RicianParams p;
  p.k_factor = k;
  return p;
}

TrialModel reference_model(Eigen::Index m, psc::Kind kind, bool direct) {
  TrialModel t;
  t.m = m;
  t.g = unit_params(1.34896288259165);
  t.user_t.h = unit_params(1.34896288259165);
  t.user_r.h = unit_params(1.34896288259165);
  if (direct) {
    t.user_t.direct = unit_params(1.34896288259165);
    t.user_r.direct = unit_params(1.34896288259165);
  }
  t.strategy.kind = kind;
  t.ma.scheme = link::Scheme::oma;
  t.ma.noise_power = 1.0;
  return t;
}

bool identical(const mc::SweepResult& a, const mc::SweepResult& b) {
  if (a.axis != b.axis) return false;
  for (const User u : {User::T, User::R}) {
    const auto& pa = a.user(u);
    const auto& pb = b.user(u);
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i].estimate != pb[i].estimate) return false;
      if (pa[i].ci_low != pb[i].ci_low) return false;
      if (pa[i].ci_high != pb[i].ci_high) return false;
      if (pa[i].trials != pb[i].trials) return false;
    }
  }
  return true;
}
}  // namespace

TEST_CASE("fit_exponent: exact synthetic power law") {
  mc::SweepResult r;
  r.axis_kind = mc::AxisKind::linear;
  for (double x : {1.0, 2.0, 4.0, 9.0, 16.0}) {
    r.axis.push_back(x);
    mc::PointEstimate e;
    e.estimate = x * x;
    e.trials = 1;
    r.user_t.push_back(e);
    r.user_r.push_back(e);
  }
  const mc::FitResult f = mc::fit_exponent(r, User::T);
  CHECK(std::abs(f.slope - 2.0) < 1e-12);
  CHECK(f.stderr_slope < 1e-12);
  CHECK(f.points_used == 5);
}

TEST_CASE("fit_exponent: window filtering and insufficient data") {
  mc::SweepResult r;
  r.axis_kind = mc::AxisKind::linear;
  for (double x : {1.0, 2.0, 4.0}) {
    r.axis.push_back(x);
    mc::PointEstimate e;
    e.estimate = (x == 2.0) ? 0.0 : x;  // zero estimates are excluded
    r.user_t.push_back(e);
    r.user_r.push_back(e);
  }
  CHECK_THROWS_AS(mc::fit_exponent(r, User::T), mc::InsufficientDataError);
  mc::FitWindow w;
  w.axis_max = 0.5;
  CHECK_THROWS_AS(mc::fit_exponent(r, User::T, w), mc::InsufficientDataError);
}

TEST_CASE("fit_exponent converts a dB axis to linear power") {
  mc::SweepResult r;
  r.axis_kind = mc::AxisKind::snr_db;
  for (double snr : {0.0, 10.0, 20.0, 30.0}) {
    r.axis.push_back(snr);
    mc::PointEstimate e;
    e.estimate = std::pow(10.0, -2.0 * snr / 10.0);  // diversity 2
    r.user_r.push_back(e);
    r.user_t.push_back(e);
  }
  const mc::FitResult f = mc::fit_exponent(r, User::R);
  CHECK(std::abs(f.slope + 2.0) < 1e-12);
}

TEST_CASE("estimate_outage: deterministic for a fixed seed") {
  const TrialModel t = reference_model(4, psc::Kind::dp, true);
  const std::vector<double> grid{0.0, 5.0, 10.0};
  const auto a = mc::estimate_outage(t, grid, 5000, 99, 2);
  const auto b = mc::estimate_outage(t, grid, 5000, 99, 2);
  CHECK(identical(a, b));
  const auto c = mc::estimate_outage(t, grid, 5000, 100, 2);
  CHECK_FALSE(identical(a, c));
}

TEST_CASE("estimate_outage: invariant under the worker count") {
  const TrialModel t = reference_model(4, psc::Kind::ps, true);
  const std::vector<double> grid{0.0, 6.0, 12.0};
  const auto w1 = mc::estimate_outage(t, grid, 20000, 7, 1);
  const auto w4 = mc::estimate_outage(t, grid, 20000, 7, 4);
  const auto w16 = mc::estimate_outage(t, grid, 20000, 7, 16);
  CHECK(identical(w1, w4));
  CHECK(identical(w1, w16));
}

TEST_CASE("estimate_power: invariant under the worker count (float reduction order)") {
  const TrialModel t = reference_model(8, psc::Kind::random, true);
  const std::vector<Eigen::Index> grid{4, 8};
  const auto w1 = mc::estimate_power(t, grid, 20000, 3, 1);
  const auto w4 = mc::estimate_power(t, grid, 20000, 3, 4);
  const auto w16 = mc::estimate_power(t, grid, 20000, 3, 16);
  CHECK(identical(w1, w4));
  CHECK(identical(w1, w16));
}

TEST_CASE("estimate_outage rejects zero trials; estimates carry Wilson intervals") {
  const TrialModel t = reference_model(2, psc::Kind::dp, true);
  CHECK_THROWS_AS(mc::estimate_outage(t, {0.0}, 0, 1, 1), std::invalid_argument);
  const auto r = mc::estimate_outage(t, {0.0}, 4000, 1, 0);
  for (const auto& e : r.user_t) {
    CHECK(e.ci_low <= e.estimate);
    CHECK(e.estimate <= e.ci_high);
    CHECK(e.trials == 4000);
  }
}

TEST_CASE("wilson interval: rule-of-three endpoints") {
  double lo, hi;
  mc::wilson_interval(0, 1000, lo, hi);
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(0.003));
  mc::wilson_interval(1000, 1000, lo, hi);
  CHECK(hi == 1.0);
  CHECK(lo == doctest::Approx(0.997));
  mc::wilson_interval(500, 1000, lo, hi);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(hi - lo < 0.07);
}

TEST_CASE("estimate_power: deterministic unit channels under the aligned model") {
  // Strongly line-of-sight legs make every magnitude 1, so the independent
  // configuration yields |H|^2 = (1 + 1)^2 = 4 for both users at M = 1.
  TrialModel t = reference_model(1, psc::Kind::independent, true);
  t.g = unit_params(1e12);
  t.user_t.h = unit_params(1e12);
  t.user_r.h = unit_params(1e12);
  t.user_t.direct = unit_params(1e12);
  t.user_r.direct = unit_params(1e12);
  t.strategy.beta_r = 1.0;  // full reflection: user R is served at amplitude 1
  const auto r = mc::estimate_power(t, {1}, 200, 5, 1);
  CHECK(r.user_r[0].estimate == doctest::Approx(4.0).epsilon(1e-5));
  // User T gets beta_t = 0: direct link only.
  CHECK(r.user_t[0].estimate == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("estimate_power: random configuration matches the linear law within 3%") {
  TrialModel t = reference_model(64, psc::Kind::random, false);
  const auto r = mc::estimate_power(t, {64}, 100000, 12, 0);
  const channel::Moments hm = channel::rician_moments(t.user_r.h);
  const channel::Moments gm = channel::rician_moments(t.g);
  const double want = analysis::power_scaling(psc::Kind::random, true, 64.0, hm,
                                              std::sqrt(gm.omega), t.strategy.beta_r, nullptr);
  CHECK(std::abs(r.user_r[0].estimate - want) / want < 0.03);
}

TEST_CASE("strategy power ordering: aligned > symmetric-split > one-bit secondary") {
  // Matched channels, beta = 1/sqrt(2), M = 128, no direct links.
  const Eigen::Index m = 128;
  const long trials = 8000;
  auto ps = reference_model(m, psc::Kind::ps, false);
  ps.strategy.primary_user = User::R;
  auto dp = reference_model(m, psc::Kind::dp, false);
  const auto rp = mc::estimate_power(ps, {m}, trials, 31, 0);
  const auto rd = mc::estimate_power(dp, {m}, trials, 31, 0);
  const auto& primary = rp.user_r[0];    // exactly cophased side
  const auto& secondary = rp.user_t[0];  // one-bit side
  const auto& balanced = rd.user_r[0];
  CHECK(primary.ci_low > balanced.ci_high);
  CHECK(balanced.ci_low > secondary.ci_high);
}

TEST_CASE("run_trial exposes a reproducible realization/coefficient pair") {
  const TrialModel t = reference_model(6, psc::Kind::dp, true);
  rng::Stream s1(77, 0);
  rng::Stream s2(77, 0);
  const auto a = mc::run_trial(t, s1);
  const auto b = mc::run_trial(t, s2);
  CHECK(a.realization.g.isApprox(b.realization.g));
  CHECK(a.coefficients.phi_r.isApprox(b.coefficients.phi_r));
  CHECK(surface::validate(a.coefficients, surface::CouplingMode::constrained).ok());
}

TEST_CASE("random-configuration outage sits below the product bound at moderate SNR") {
  TrialModel t = reference_model(16, psc::Kind::random, true);
  const std::vector<double> grid{8.0, 12.0, 16.0};
  const auto r = mc::estimate_outage(t, grid, 100000, 21, 0);
  const channel::Moments hm = channel::rician_moments(t.user_r.h);
  const channel::Moments gm = channel::rician_moments(t.g);
  const double omega_r =
      16.0 * gm.omega * t.strategy.beta_r * t.strategy.beta_r * hm.omega;
  const link::Thresholds th = link::thresholds(t.ma);
  const analysis::LinkStats d{t.user_r.direct->k_factor, t.user_r.direct->effective_omega()};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p_bs = std::pow(10.0, grid[i] / 10.0);
    const double bound = analysis::random_outage_bound(omega_r, d, th.tau_r, p_bs);
    CHECK(r.user_r[i].estimate <= bound + (r.user_r[i].ci_high - r.user_r[i].estimate));
    // Where both factors of the product are appreciable the bound is tight.
    if (r.user_r[i].estimate > 0.15 && r.user_r[i].estimate < 0.6) {
      CHECK(std::abs(r.user_r[i].estimate - bound) / bound < 0.15);
    }
  }
}
