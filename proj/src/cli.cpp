// SPDX-License-Identifier: Apache-2.0

#include "starsim/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "starsim/analysis.hpp"
#include "starsim/link.hpp"
#include "starsim/specfun.hpp"

namespace starsim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_or_empty(double v) { return std::isnan(v) ? "" : fmt(v); }

double user_amplitude(const scenario::ScenarioConfig& cfg, User user) {
  const double br = cfg.surface.beta_r;
  return user == User::R ? br : std::sqrt(std::max(0.0, 1.0 - br * br));
}

double tau_for(const scenario::ScenarioConfig& cfg, User user) {
  const link::Thresholds th = link::thresholds(cfg.ma_config());
  return user == User::T ? th.tau_t : th.tau_r;
}

struct EmittedFile {
  std::string name;
  long rows;
};

void write_manifest(const RunOptions& opts, const scenario::ScenarioConfig& cfg,
                    const std::vector<EmittedFile>& files) {
  json manifest;
  manifest["version"] = kVersion;
  manifest["subcommand"] = opts.subcommand;
  manifest["config_hash"] = scenario::config_hash(cfg);
  manifest["seed"] = cfg.sim.seed;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&tt));
  manifest["created_utc"] = stamp;
  json file_list = json::array();
  for (const EmittedFile& f : files) {
    file_list.push_back({{"name", f.name}, {"rows", f.rows}});
  }
  manifest["files"] = file_list;
  json config = json::object();
  std::istringstream canon(cfg.canonical());
  std::string line;
  while (std::getline(canon, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) config[line.substr(0, eq)] = line.substr(eq + 3);
  }
  manifest["config"] = config;
  std::ofstream out(fs::path(opts.output_dir) / "manifest.json");
  out << manifest.dump(2) << "\n";
}

std::vector<psc::Kind> run_strategies(const RunOptions& opts,
                                      const scenario::ScenarioConfig& cfg) {
  if (opts.strategies.empty()) return {cfg.surface.strategy};
  std::vector<psc::Kind> kinds;
  kinds.reserve(opts.strategies.size());
  for (const std::string& name : opts.strategies) {
    try {
      kinds.push_back(psc::kind_from_name(name));
    } catch (const std::exception& e) {
      throw scenario::ConfigError(e.what());
    }
  }
  return kinds;
}

int run_outage(const RunOptions& opts, const scenario::ScenarioConfig& cfg, std::ostream& log,
               std::vector<EmittedFile>& files) {
  std::ofstream csv(fs::path(opts.output_dir) / "outage.csv");
  csv << "snr_db,strategy,user,p_out,ci_low,ci_high,trials,analytic_value\n";
  long rows = 0;
  for (const psc::Kind kind : run_strategies(opts, cfg)) {
    scenario::ScenarioConfig run_cfg = cfg;
    run_cfg.surface.strategy = kind;
    log << "outage: strategy=" << psc::kind_name(kind) << " points=" << cfg.sim.snr_db.size()
        << " trials=" << cfg.sim.trials << "\n";
    const mc::SweepResult sweep =
        mc::estimate_outage(run_cfg.trial_model(), cfg.sim.snr_db, cfg.sim.trials, cfg.sim.seed,
                            cfg.sim.workers);
    for (const User user : {User::T, User::R}) {
      const auto& pts = sweep.user(user);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double snr = sweep.axis[i];
        const double overlay = outage_overlay(run_cfg, kind, user, snr);
        csv << fmt(snr) << ',' << psc::kind_name(kind) << ',' << (user == User::T ? 'T' : 'R')
            << ',' << fmt(pts[i].estimate) << ',' << fmt(pts[i].ci_low) << ','
            << fmt(pts[i].ci_high) << ',' << pts[i].trials << ',' << fmt_or_empty(overlay)
            << "\n";
        ++rows;
      }
    }
  }
  files.push_back({"outage.csv", rows});
  return 0;
}

int run_scaling(const RunOptions& opts, const scenario::ScenarioConfig& cfg, std::ostream& log,
                std::vector<EmittedFile>& files) {
  std::ofstream csv(fs::path(opts.output_dir) / "scaling.csv");
  csv << "m,strategy,user,mean_power_db,ci_low,ci_high,analytic_value\n";
  long rows = 0;
  std::vector<Eigen::Index> m_grid(cfg.sim.m_grid.begin(), cfg.sim.m_grid.end());
  for (const psc::Kind kind : run_strategies(opts, cfg)) {
    scenario::ScenarioConfig run_cfg = cfg;
    run_cfg.surface.strategy = kind;
    log << "scaling: strategy=" << psc::kind_name(kind) << " points=" << m_grid.size()
        << " trials=" << cfg.sim.trials << "\n";
    const mc::SweepResult sweep = mc::estimate_power(run_cfg.trial_model(), m_grid,
                                                     cfg.sim.trials, cfg.sim.seed,
                                                     cfg.sim.workers);
    for (const User user : {User::T, User::R}) {
      const auto& pts = sweep.user(user);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const long m = cfg.sim.m_grid[i];
        const double overlay = power_overlay(run_cfg, kind, user, m);
        const auto db = [](double v) { return 10.0 * std::log10(std::max(v, 1e-300)); };
        csv << m << ',' << psc::kind_name(kind) << ',' << (user == User::T ? 'T' : 'R') << ','
            << fmt(db(pts[i].estimate)) << ',' << fmt(db(std::max(pts[i].ci_low, 0.0))) << ','
            << fmt(db(pts[i].ci_high)) << ','
            << (std::isnan(overlay) ? "" : fmt(db(overlay))) << "\n";
        ++rows;
      }
    }
  }
  files.push_back({"scaling.csv", rows});
  return 0;
}

int run_pattern(const RunOptions& opts, const scenario::ScenarioConfig& cfg, std::ostream& log,
                std::vector<EmittedFile>& files) {
  const pattern::PatternConfig pc = cfg.pattern_config();
  const channel::ChannelRealization real = pattern::los_realization(
      pc, cfg.user_t.angle_deg, cfg.user_t.distance_m, cfg.user_r.angle_deg,
      cfg.user_r.distance_m, cfg.user_t.direct.present || cfg.user_r.direct.present);
  for (const psc::Kind kind : run_strategies(opts, cfg)) {
    psc::StrategySpec spec = cfg.strategy_spec();
    spec.kind = kind;
    rng::Stream stream(cfg.sim.seed, rng::stream_id(0xFA11, 0));
    const surface::SurfaceCoefficients coeffs = psc::configure(real, spec, stream);
    pattern::Pattern pat;
    if (opts.fading_average <= 0) {
      pat = pattern::compute_pattern(pc, coeffs);
    } else {
      // Mean power over fading draws: strategy phases follow each faded
      // channel, propagation stays geometric.
      mc::TrialModel model = cfg.trial_model();
      model.strategy.kind = kind;
      pattern::PatternConfig raw = pc;
      raw.normalize_to_peak = false;
      std::vector<double> mean_power;
      for (long n = 0; n < opts.fading_average; ++n) {
        rng::Stream draw(cfg.sim.seed, rng::stream_id(0xFAD0, static_cast<std::uint32_t>(n)));
        const mc::TrialOutcome trial = mc::run_trial(model, draw);
        const pattern::Pattern one = pattern::compute_pattern(raw, trial.coefficients);
        if (mean_power.empty()) mean_power.assign(one.power_db.size(), 0.0);
        for (std::size_t i = 0; i < one.power_db.size(); ++i) {
          mean_power[i] += std::pow(10.0, one.power_db[i] / 10.0) / opts.fading_average;
        }
        pat.angle_deg = one.angle_deg;
      }
      pat.power_db.resize(mean_power.size());
      double peak = -std::numeric_limits<double>::infinity();
      for (const double p : mean_power) peak = std::max(peak, p);
      const double ref = pc.normalize_to_peak ? 10.0 * std::log10(peak) : 0.0;
      for (std::size_t i = 0; i < mean_power.size(); ++i) {
        pat.power_db[i] = 10.0 * std::log10(std::max(mean_power[i], 1e-300)) - ref;
      }
    }
    const std::string name = std::string("pattern_") + psc::kind_name(kind) + ".csv";
    log << "pattern: strategy=" << psc::kind_name(kind) << " angles=" << pat.angle_deg.size()
        << (opts.fading_average > 0 ? " (fading-averaged)" : "") << "\n";
    std::ofstream csv(fs::path(opts.output_dir) / name);
    csv << "angle_deg,power_db\n";
    for (std::size_t i = 0; i < pat.angle_deg.size(); ++i) {
      csv << fmt(pat.angle_deg[i]) << ',' << fmt(pat.power_db[i]) << "\n";
    }
    files.push_back({name, static_cast<long>(pat.angle_deg.size())});
    if (opts.dump_coefficients) {
      const std::string cname = std::string("coefficients_") + psc::kind_name(kind) + ".csv";
      std::ofstream ccsv(fs::path(opts.output_dir) / cname);
      surface::write_coefficients_csv(ccsv, coeffs);
      files.push_back({cname, static_cast<long>(coeffs.size())});
    }
  }
  return 0;
}

int run_validate(const scenario::ScenarioConfig& cfg, std::ostream& out) {
  const std::vector<CheckResult> checks = self_checks(cfg);
  bool all = true;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
    all = all && c.pass;
  }
  out << (all ? "all checks passed\n" : "CHECKS FAILED\n");
  return all ? 0 : 3;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

double outage_overlay(const scenario::ScenarioConfig& cfg, psc::Kind kind, User user,
                      double snr_db) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double p_bs = std::pow(10.0, cfg.ma.noise_dbm / 10.0) * std::pow(10.0, snr_db / 10.0);
  const double tau = tau_for(cfg, user);
  const analysis::LinkStats h = analysis::LinkStats::of(cfg.h_params(user));
  const analysis::LinkStats g = analysis::LinkStats::of(cfg.g_params());
  const auto direct_p = cfg.direct_params(user);
  std::optional<analysis::LinkStats> direct;
  if (direct_p) direct = analysis::LinkStats::of(*direct_p);
  const double beta = user_amplitude(cfg, user);
  const long m = cfg.elements();

  switch (kind) {
    case psc::Kind::ps: {
      if (user != cfg.surface.primary_user) return nan;  // no closed form
      if (!direct || beta <= 0.0) return nan;
      return analysis::ps_primary_outage_asymptote(h, g, *direct, static_cast<int>(m), beta,
                                                   tau, p_bs)
          .value;
    }
    case psc::Kind::dp: {
      return analysis::dp_outage_upper_bound(cfg.h_params(user), cfg.g_params(), direct,
                                             static_cast<int>(m), tau, p_bs);
    }
    case psc::Kind::tr: {
      if (!direct) return nan;
      const psc::StrategySpec spec = cfg.strategy_spec();
      const Eigen::Index mt = spec.t_group_size(m);
      const Eigen::Index m_chi = (user == User::T) ? mt : m - mt;
      return analysis::tr_outage_asymptote(h, g, *direct, static_cast<int>(m_chi), tau, p_bs)
          .value;
    }
    case psc::Kind::random: {
      // Incoherent sum: the Rayleigh scale carries second moments.
      const double omega_r = m * g.omega * beta * beta * h.omega;
      return analysis::random_outage_bound(omega_r, direct, tau, p_bs);
    }
    case psc::Kind::independent: {
      if (!direct || beta <= 0.0) return nan;
      return analysis::ps_primary_outage_asymptote(h, g, *direct, static_cast<int>(m), beta,
                                                   tau, p_bs)
          .value;
    }
  }
  return nan;
}

double power_overlay(const scenario::ScenarioConfig& cfg, psc::Kind kind, User user, long m) {
  const channel::Moments hm = channel::rician_moments(cfg.h_params(user));
  const channel::Moments gm = channel::rician_moments(cfg.g_params());
  const auto direct_p = cfg.direct_params(user);
  channel::Moments dm;
  if (direct_p) dm = channel::rician_moments(*direct_p);
  const channel::Moments* dptr = direct_p ? &dm : nullptr;
  const double beta = user_amplitude(cfg, user);

  switch (kind) {
    case psc::Kind::ps:
      return analysis::power_scaling(kind, user == cfg.surface.primary_user,
                                     static_cast<double>(m), hm, gm.mu, beta, dptr);
    case psc::Kind::dp:
      return analysis::power_scaling(kind, true, static_cast<double>(m), hm, gm.mu, beta, dptr);
    case psc::Kind::tr: {
      const psc::StrategySpec spec = cfg.strategy_spec();
      const Eigen::Index mt = spec.t_group_size(m);
      const Eigen::Index m_chi = (user == User::T) ? mt : m - mt;
      return analysis::power_scaling(kind, true, static_cast<double>(m_chi), hm, gm.mu, 1.0,
                                     dptr);
    }
    case psc::Kind::random:
      return analysis::power_scaling(kind, true, static_cast<double>(m), hm,
                                     std::sqrt(gm.omega), beta, dptr);
    case psc::Kind::independent:
      return analysis::power_scaling(kind, true, static_cast<double>(m), hm, gm.mu, beta, dptr);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<CheckResult> self_checks(const scenario::ScenarioConfig& cfg) {
  std::vector<CheckResult> checks;
  const analysis::LinkStats h = analysis::LinkStats::of(cfg.h_params(User::R));
  const analysis::LinkStats g = analysis::LinkStats::of(cfg.g_params());
  analysis::LinkStats direct{1.0, 1.0};
  if (const auto dp = cfg.direct_params(User::R)) direct = analysis::LinkStats::of(*dp);

  // Closed-form tail mass vs quadrature of the asymptotic amplitude PDF.
  {
    bool pass = true;
    std::ostringstream detail;
    for (const int m : {1, 2, 4}) {
      const double tau = 1.0;
      const double p_bs = 1e3;
      const double closed =
          analysis::ps_primary_outage_asymptote(h, g, direct, m, cfg.surface.beta_r, tau, p_bs)
              .raw;
      const double upper = std::sqrt(tau / p_bs);
      const double quad = simpson(
          [&](double x) {
            return analysis::ps_primary_asymptotic_pdf(x, h, g, direct, m, cfg.surface.beta_r);
          },
          0.0, upper, 4096);
      const double rel = std::abs(quad - closed) / closed;
      detail << "M=" << m << " rel=" << rel << " ";
      pass = pass && rel < 1e-10;
    }
    checks.push_back({"outage asymptote equals quadrature of asymptotic pdf", pass,
                      detail.str()});
  }

  // Moment-matched Rician approximations integrate to one.
  {
    const channel::Moments hm = channel::rician_moments(cfg.h_params(User::T));
    const channel::Moments gm = channel::rician_moments(cfg.g_params());
    const double bt = user_amplitude(cfg, User::T);
    const double mu_term = bt * gm.mu * hm.mu;
    const double omega_term = bt * bt * gm.omega * hm.omega;
    bool pass = true;
    std::ostringstream detail;
    for (const double delta : {3.14159265358979323846, 0.5 * 3.14159265358979323846}) {
      const analysis::RicianApprox a =
          analysis::rician_sum_approx(delta, cfg.elements(), mu_term, omega_term);
      const double sd = std::sqrt(a.beta_shape_sq);
      const double lo = std::max(0.0, a.alpha_shape - 14.0 * sd);
      const double hi = a.alpha_shape + 14.0 * sd;
      const double mass = simpson([&](double x) { return a.pdf(x); }, lo, hi, 20000);
      detail << "delta=" << delta << " mass_err=" << std::abs(mass - 1.0) << " ";
      pass = pass && std::abs(mass - 1.0) < 1e-6;
    }
    checks.push_back({"approximate amplitude pdfs integrate to one", pass, detail.str()});
  }

  // Log-log slope of each closed-form outage curve vs the diversity order.
  {
    bool pass = true;
    std::ostringstream detail;
    const int m = cfg.elements();
    const double tau = 1.0;
    const auto log_slope_of = [&](const std::function<double(double)>& log_f, double p1,
                                  double p2) {
      return -(log_f(p2) - log_f(p1)) / (std::log(p2) - std::log(p1));
    };
    {
      const double p1 = 1e3, p2 = 1e6;
      const double s = log_slope_of(
          [&](double p) {
            return analysis::ps_primary_outage_asymptote(h, g, direct, m, cfg.surface.beta_r,
                                                         tau, p)
                .log_raw;
          },
          p1, p2);
      const double want = analysis::diversity_order(psc::Kind::ps, cfg.surface.primary_user,
                                                    cfg.surface.primary_user, m, 0, 0, true);
      detail << "ps=" << s << "/" << want << " ";
      pass = pass && std::abs(s - want) < 1e-6;
    }
    {
      const Eigen::Index mt = cfg.strategy_spec().t_group_size(m);
      const double p1 = 1e3, p2 = 1e6;
      const double s = log_slope_of(
          [&](double p) {
            return analysis::tr_outage_asymptote(h, g, direct, static_cast<int>(mt), tau, p)
                .log_raw;
          },
          p1, p2);
      const double want = analysis::diversity_order(psc::Kind::tr, User::T, User::R, m,
                                                    static_cast<int>(m - mt),
                                                    static_cast<int>(mt), true);
      detail << "tr=" << s << "/" << want << " ";
      pass = pass && std::abs(s - want) < 1e-6;
    }
    {
      const double omega_r = m * g.omega * cfg.surface.beta_r * cfg.surface.beta_r * h.omega;
      const double p_lo = tau * 1e7 * std::max(1.0 / omega_r, (direct.k + 1.0) / direct.omega);
      const double s = log_slope_of(
          [&](double p) {
            return std::log(
                analysis::random_outage_bound(omega_r, std::optional(direct), tau, p));
          },
          p_lo, 10.0 * p_lo);
      const double want =
          analysis::diversity_order(psc::Kind::random, User::R, User::R, m, 0, 0, true);
      detail << "random=" << s << "/" << want;
      pass = pass && std::abs(s - want) < 1e-6;
    }
    checks.push_back({"closed-form outage slopes equal diversity orders", pass, detail.str()});
  }

  // Special-function identities.
  {
    bool pass = true;
    std::ostringstream detail;
    pass = pass && std::abs(specfun::marcum_q1(1.5, 0.0) - 1.0) < 1e-15;
    pass = pass && std::abs(specfun::marcum_q1(0.0, 1.0) - std::exp(-0.5)) < 1e-12;
    const double x = 1.7;
    const double rec =
        specfun::bessel_k(2, x) - (specfun::bessel_k(0, x) + 2.0 / x * specfun::bessel_k(1, x));
    pass = pass && std::abs(rec) < 1e-12 * specfun::bessel_k(2, x);
    pass = pass && std::abs(specfun::sinc_u(1.57079632679489662) - 2.0 / 3.14159265358979323846) <
                       1e-14;
    pass = pass && std::abs(specfun::laguerre_half(0.0) - 1.0) < 1e-14;
    for (const User u : {User::T, User::R}) {
      const channel::Moments mo = channel::rician_moments(cfg.h_params(u));
      pass = pass && std::abs(mo.omega - (mo.var + mo.mu * mo.mu)) < 1e-12 * mo.omega;
    }
    detail << "identities";
    checks.push_back({"special-function and moment identities", pass, detail.str()});
  }

  return checks;
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& log) {
  try {
    scenario::ScenarioConfig cfg = opts.config_path.empty()
                                       ? scenario::ScenarioConfig::defaults()
                                       : scenario::ScenarioConfig::from_file(opts.config_path);
    cfg.apply_overrides(opts.overrides);

    if (opts.subcommand == "validate") {
      return run_validate(cfg, out);
    }

    fs::create_directories(opts.output_dir);
    std::vector<EmittedFile> files;
    int rc = 0;
    if (opts.subcommand == "outage") {
      rc = run_outage(opts, cfg, log, files);
    } else if (opts.subcommand == "scaling") {
      rc = run_scaling(opts, cfg, log, files);
    } else if (opts.subcommand == "pattern") {
      rc = run_pattern(opts, cfg, log, files);
    } else {
      throw scenario::ConfigError("unknown subcommand: " + opts.subcommand);
    }
    if (rc == 0) {
      write_manifest(opts, cfg, files);
      for (const EmittedFile& f : files) {
        out << f.name << ": " << f.rows << " rows\n";
      }
    }
    return rc;
  } catch (const scenario::ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace starsim::cli
