// SPDX-License-Identifier: Apache-2.0

#include "starsim/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace starsim::mc {

namespace {

constexpr long kBlockTrials = 4096;
constexpr double kZ95 = 1.959963984540054;

void run_tasks(long n, int workers, const std::function<void(long)>& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, n)));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const long i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= n) break;
          fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct ResolvedModel {
  TrialModel model;

  explicit ResolvedModel(const TrialModel& in, Eigen::Index m_override = -1) : model(in) {
    if (m_override >= 0) model.m = m_override;
    model.g.check();
    model.user_t.h.check();
    model.user_r.h.check();
    if (model.user_t.direct) model.user_t.direct->check();
    if (model.user_r.direct) model.user_r.direct->check();
    model.strategy.check(model.m);
  }
};

struct Gains {
  double t;
  double r;
};

Gains trial_gains(const TrialModel& m, rng::Stream& stream) {
  channel::ChannelRealization real;
  real.g = channel::sample(m.g, stream, m.m);
  real.h_t = channel::sample(m.user_t.h, stream, m.m);
  real.h_r = channel::sample(m.user_r.h, stream, m.m);
  if (m.user_t.direct) real.h_d_t = channel::sample(*m.user_t.direct, stream, 1)[0];
  if (m.user_r.direct) real.h_d_r = channel::sample(*m.user_r.direct, stream, 1)[0];

  const surface::SurfaceCoefficients coeffs = psc::configure(real, m.strategy, stream);
  const std::complex<double> st = link::surface_sum(real, coeffs, User::T);
  const std::complex<double> sr = link::surface_sum(real, coeffs, User::R);

  Gains g;
  if (m.strategy.kind == psc::Kind::random && m.random_combining == Combining::power_sum) {
    g.t = std::norm(st) + std::norm(real.h_d_t);
    g.r = std::norm(sr) + std::norm(real.h_d_r);
  } else {
    g.t = std::norm(st + real.h_d_t);
    g.r = std::norm(sr + real.h_d_r);
  }
  return g;
}

long block_count(long trials) { return (trials + kBlockTrials - 1) / kBlockTrials; }

}  // namespace

TrialOutcome run_trial(const TrialModel& model, rng::Stream& stream) {
  const ResolvedModel rm(model);
  const TrialModel& m = rm.model;
  TrialOutcome out;
  out.realization.g = channel::sample(m.g, stream, m.m);
  out.realization.h_t = channel::sample(m.user_t.h, stream, m.m);
  out.realization.h_r = channel::sample(m.user_r.h, stream, m.m);
  if (m.user_t.direct) out.realization.h_d_t = channel::sample(*m.user_t.direct, stream, 1)[0];
  if (m.user_r.direct) out.realization.h_d_r = channel::sample(*m.user_r.direct, stream, 1)[0];
  out.coefficients = psc::configure(out.realization, m.strategy, stream);
  return out;
}

void wilson_interval(long k, long n, double& lo, double& hi) {
  const double nn = static_cast<double>(n);
  if (k == 0) {  // rule of three
    lo = 0.0;
    hi = std::min(1.0, 3.0 / nn);
    return;
  }
  if (k == n) {
    lo = std::max(0.0, 1.0 - 3.0 / nn);
    hi = 1.0;
    return;
  }
  const double p = static_cast<double>(k) / nn;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  lo = std::max(0.0, center - half);
  hi = std::min(1.0, center + half);
}

SweepResult estimate_outage(const TrialModel& model, const std::vector<double>& snr_db_grid,
                            long trials, std::uint64_t seed, int workers) {
  if (trials <= 0) throw std::invalid_argument("estimate_outage: trials must be > 0");
  if (snr_db_grid.empty()) throw std::invalid_argument("estimate_outage: empty SNR grid");
  const ResolvedModel rm(model);
  const link::Thresholds th = link::thresholds(rm.model.ma);

  const long n_points = static_cast<long>(snr_db_grid.size());
  const long n_blocks = block_count(trials);
  std::vector<long> fail_t(n_points * n_blocks, 0);
  std::vector<long> fail_r(n_points * n_blocks, 0);

  run_tasks(n_points * n_blocks, workers, [&](long task) {
    const long pi = task / n_blocks;
    const long bi = task % n_blocks;
    const long lo = bi * kBlockTrials;
    const long hi = std::min(trials, lo + kBlockTrials);
    const double p_bs =
        rm.model.ma.noise_power * std::pow(10.0, snr_db_grid[static_cast<size_t>(pi)] / 10.0);
    rng::Stream stream(seed, rng::stream_id(static_cast<std::uint32_t>(pi),
                                            static_cast<std::uint32_t>(bi)));
    long kt = 0;
    long kr = 0;
    for (long i = lo; i < hi; ++i) {
      const Gains g = trial_gains(rm.model, stream);
      kt += link::outage_event_gain(g.t, th.tau_t, p_bs) ? 1 : 0;
      kr += link::outage_event_gain(g.r, th.tau_r, p_bs) ? 1 : 0;
    }
    fail_t[task] = kt;
    fail_r[task] = kr;
  });

  SweepResult out;
  out.axis_kind = AxisKind::snr_db;
  out.axis = snr_db_grid;
  out.user_t.resize(n_points);
  out.user_r.resize(n_points);
  for (long pi = 0; pi < n_points; ++pi) {
    long kt = 0;
    long kr = 0;
    for (long bi = 0; bi < n_blocks; ++bi) {
      kt += fail_t[pi * n_blocks + bi];
      kr += fail_r[pi * n_blocks + bi];
    }
    PointEstimate& et = out.user_t[pi];
    PointEstimate& er = out.user_r[pi];
    et.trials = er.trials = trials;
    et.estimate = static_cast<double>(kt) / trials;
    er.estimate = static_cast<double>(kr) / trials;
    wilson_interval(kt, trials, et.ci_low, et.ci_high);
    wilson_interval(kr, trials, er.ci_low, er.ci_high);
  }
  return out;
}

SweepResult estimate_power(const TrialModel& model, const std::vector<Eigen::Index>& m_grid,
                           long trials, std::uint64_t seed, int workers) {
  if (trials <= 0) throw std::invalid_argument("estimate_power: trials must be > 0");
  if (m_grid.empty()) throw std::invalid_argument("estimate_power: empty element grid");

  std::vector<ResolvedModel> models;
  models.reserve(m_grid.size());
  for (const Eigen::Index m : m_grid) models.emplace_back(model, m);

  const long n_points = static_cast<long>(m_grid.size());
  const long n_blocks = block_count(trials);
  struct BlockSum {
    double t = 0.0, t2 = 0.0, r = 0.0, r2 = 0.0;
  };
  std::vector<BlockSum> sums(n_points * n_blocks);

  run_tasks(n_points * n_blocks, workers, [&](long task) {
    const long pi = task / n_blocks;
    const long bi = task % n_blocks;
    const long lo = bi * kBlockTrials;
    const long hi = std::min(trials, lo + kBlockTrials);
    rng::Stream stream(seed, rng::stream_id(static_cast<std::uint32_t>(pi),
                                            static_cast<std::uint32_t>(bi)));
    BlockSum s;
    for (long i = lo; i < hi; ++i) {
      const Gains g = trial_gains(models[static_cast<size_t>(pi)].model, stream);
      s.t += g.t;  // |H|^2 at unit transmit power
      s.t2 += g.t * g.t;
      s.r += g.r;
      s.r2 += g.r * g.r;
    }
    sums[task] = s;
  });

  SweepResult out;
  out.axis_kind = AxisKind::element_count;
  out.axis.reserve(m_grid.size());
  for (const Eigen::Index m : m_grid) out.axis.push_back(static_cast<double>(m));
  out.user_t.resize(n_points);
  out.user_r.resize(n_points);
  for (long pi = 0; pi < n_points; ++pi) {
    BlockSum total;
    for (long bi = 0; bi < n_blocks; ++bi) {  // block order: deterministic rounding
      const BlockSum& s = sums[pi * n_blocks + bi];
      total.t += s.t;
      total.t2 += s.t2;
      total.r += s.r;
      total.r2 += s.r2;
    }
    const double n = static_cast<double>(trials);
    auto fill = [&](PointEstimate& e, double sum, double sumsq) {
      e.trials = trials;
      e.estimate = sum / n;
      const double var = std::max(0.0, (sumsq - n * e.estimate * e.estimate) / (n - 1.0));
      const double half = kZ95 * std::sqrt(var / n);
      e.ci_low = e.estimate - half;
      e.ci_high = e.estimate + half;
    };
    fill(out.user_t[pi], total.t, total.t2);
    fill(out.user_r[pi], total.r, total.r2);
  }
  return out;
}

FitResult fit_exponent(const SweepResult& result, User user, const FitWindow& window) {
  const std::vector<PointEstimate>& pts = result.user(user);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double axis = result.axis[i];
    if (axis < window.axis_min || axis > window.axis_max) continue;
    const double y = pts[i].estimate;
    if (!(y > 0.0) || y < window.value_min || y > window.value_max) continue;
    const double x =
        (result.axis_kind == AxisKind::snr_db) ? std::pow(10.0, axis / 10.0) : axis;
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const long n = static_cast<long>(lx.size());
  if (n < 3) {
    throw InsufficientDataError("fit_exponent: fewer than 3 usable points in window");
  }
  double mx = 0.0, my = 0.0;
  for (long i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (long i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  FitResult fit;
  fit.points_used = n;
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (long i = 0; i < n; ++i) {
    const double r = ly[i] - my - fit.slope * (lx[i] - mx);
    ssr += r * r;
  }
  fit.stderr_slope = (n > 2) ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace starsim::mc
