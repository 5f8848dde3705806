// SPDX-License-Identifier: Apache-2.0

#include "starsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace starsim::scenario {

namespace {

constexpr double kPi = 3.14159265358979323846;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Raw "section.key" -> value text, in file order, duplicates overwrite.
using KeyMap = std::map<std::string, std::string>;

KeyMap parse_key_values(const std::string& text) {
  KeyMap kv;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any [section]");
    }
    kv[section + "." + key] = value;
  }
  return kv;
}

struct Fetcher {
  const KeyMap& kv;
  std::set<std::string> consumed;

  bool has(const std::string& key) {
    return kv.find(key) != kv.end();
  }

  std::string raw(const std::string& key) {
    consumed.insert(key);
    return kv.at(key);
  }

  void get(const std::string& key, double& out) {
    if (!has(key)) return;
    const std::string v = raw(key);
    try {
      std::size_t used = 0;
      out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError(key + ": not a number: " + v);
    }
  }

  void get(const std::string& key, int& out) {
    double d = out;
    get(key, d);
    out = static_cast<int>(d);
    if (out != d) throw ConfigError(key + ": not an integer");
  }

  void get(const std::string& key, long& out) {
    double d = static_cast<double>(out);
    get(key, d);
    out = static_cast<long>(d);
    if (static_cast<double>(out) != d) throw ConfigError(key + ": not an integer");
  }

  void get(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const std::string v = raw(key);
    try {
      out = std::stoull(v);
    } catch (const std::exception&) {
      throw ConfigError(key + ": not an unsigned integer: " + v);
    }
  }

  void get(const std::string& key, bool& out) {
    if (!has(key)) return;
    const std::string v = raw(key);
    if (v == "true" || v == "1" || v == "yes") out = true;
    else if (v == "false" || v == "0" || v == "no") out = false;
    else throw ConfigError(key + ": not a boolean: " + v);
  }

  void get(const std::string& key, std::string& out) {
    if (!has(key)) return;
    out = raw(key);
  }

  // Grid syntax: "a,b,c" or "start:step:stop" (stop inclusive).
  void get_grid(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    const std::string v = raw(key);
    std::vector<double> grid;
    if (v.find(':') != std::string::npos) {
      double a, s, b;
      if (std::sscanf(v.c_str(), "%lf:%lf:%lf", &a, &s, &b) != 3 || !(s > 0.0)) {
        throw ConfigError(key + ": expected start:step:stop with step > 0");
      }
      for (double x = a; x <= b + 1e-9 * std::max(1.0, std::abs(b)); x += s) grid.push_back(x);
    } else {
      std::istringstream ls(v);
      std::string item;
      while (std::getline(ls, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
          grid.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError(key + ": not a number: " + item);
        }
      }
    }
    if (grid.empty()) throw ConfigError(key + ": empty grid");
    out = grid;
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (const auto& [key, value] : kv) {
      if (!consumed.count(key)) unknown.push_back(key);
    }
    if (!unknown.empty()) {
      std::string msg = "unknown config key(s):";
      for (const auto& k : unknown) msg += " " + k;
      throw ConfigError(msg);
    }
  }
};

void fetch_user(Fetcher& f, const std::string& section, UserConfig& u) {
  f.get(section + ".distance_m", u.distance_m);
  f.get(section + ".angle_deg", u.angle_deg);
  f.get(section + ".k_db", u.k_db);
  f.get(section + ".alpha", u.alpha);
  f.get(section + ".rho0_db", u.rho0_db);
  f.get(section + ".omega", u.omega);
  f.get(section + ".direct.present", u.direct.present);
  f.get(section + ".direct.k_db", u.direct.k_db);
  f.get(section + ".direct.eta", u.direct.eta);
}

ScenarioConfig from_key_map(const KeyMap& kv, ScenarioConfig cfg) {
  Fetcher f{kv, {}};

  f.get("surface.m_h", cfg.surface.m_h);
  f.get("surface.m_v", cfg.surface.m_v);
  f.get("surface.spacing_wavelengths", cfg.surface.spacing_wavelengths);
  f.get("surface.beta_r", cfg.surface.beta_r);
  std::string strategy = psc::kind_name(cfg.surface.strategy);
  f.get("surface.strategy", strategy);
  try {
    cfg.surface.strategy = psc::kind_from_name(strategy);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("surface.strategy: ") + e.what());
  }
  std::string primary = cfg.surface.primary_user == User::R ? "R" : "T";
  f.get("surface.primary_user", primary);
  if (primary == "R") cfg.surface.primary_user = User::R;
  else if (primary == "T") cfg.surface.primary_user = User::T;
  else throw ConfigError("surface.primary_user: expected T or R");
  std::string nu = cfg.surface.nu_rule == psc::NuRule::closest ? "closest" : "literal";
  f.get("surface.nu_rule", nu);
  if (nu == "closest") cfg.surface.nu_rule = psc::NuRule::closest;
  else if (nu == "literal") cfg.surface.nu_rule = psc::NuRule::literal;
  else throw ConfigError("surface.nu_rule: expected literal or closest");
  f.get("surface.t_group_fraction", cfg.surface.t_group_fraction);

  f.get("bs.distance_m", cfg.bs.distance_m);
  f.get("bs.angle_deg", cfg.bs.angle_deg);
  f.get("bs.k_db", cfg.bs.k_db);
  f.get("bs.alpha", cfg.bs.alpha);
  f.get("bs.rho0_db", cfg.bs.rho0_db);
  f.get("bs.omega", cfg.bs.omega);

  fetch_user(f, "user_t", cfg.user_t);
  fetch_user(f, "user_r", cfg.user_r);

  std::string scheme = cfg.ma.scheme == link::Scheme::oma ? "oma" : "noma";
  f.get("ma.scheme", scheme);
  if (scheme == "oma") cfg.ma.scheme = link::Scheme::oma;
  else if (scheme == "noma") cfg.ma.scheme = link::Scheme::noma;
  else throw ConfigError("ma.scheme: expected oma or noma");
  f.get("ma.c_t_sq", cfg.ma.c_t_sq);
  f.get("ma.c_r_sq", cfg.ma.c_r_sq);
  f.get("ma.rate_t", cfg.ma.rate_t);
  f.get("ma.rate_r", cfg.ma.rate_r);
  f.get("ma.noise_dbm", cfg.ma.noise_dbm);

  f.get("sim.trials", cfg.sim.trials);
  f.get("sim.seed", cfg.sim.seed);
  f.get("sim.workers", cfg.sim.workers);
  f.get_grid("sim.snr_db", cfg.sim.snr_db);
  std::vector<double> m_grid(cfg.sim.m_grid.begin(), cfg.sim.m_grid.end());
  f.get_grid("sim.m_grid", m_grid);
  cfg.sim.m_grid.assign(m_grid.begin(), m_grid.end());
  std::string combining =
      cfg.sim.random_outage_model == mc::Combining::power_sum ? "resolvable" : "coherent";
  f.get("sim.random_outage_model", combining);
  if (combining == "resolvable") cfg.sim.random_outage_model = mc::Combining::power_sum;
  else if (combining == "coherent") cfg.sim.random_outage_model = mc::Combining::coherent;
  else throw ConfigError("sim.random_outage_model: expected resolvable or coherent");

  f.get("pattern.wavelength_m", cfg.pattern.wavelength_m);
  f.get("pattern.eval_radius_m", cfg.pattern.eval_radius_m);
  f.get("pattern.angle_step_deg", cfg.pattern.angle_step_deg);
  f.get("pattern.normalize_to_peak", cfg.pattern.normalize_to_peak);

  f.finish();
  cfg.check();
  return cfg;
}

void append_user(std::ostringstream& os, const std::string& section, const UserConfig& u) {
  os << section << ".angle_deg = " << fmt_double(u.angle_deg) << "\n";
  os << section << ".alpha = " << fmt_double(u.alpha) << "\n";
  os << section << ".direct.eta = " << fmt_double(u.direct.eta) << "\n";
  os << section << ".direct.k_db = " << fmt_double(u.direct.k_db) << "\n";
  os << section << ".direct.present = " << (u.direct.present ? "true" : "false") << "\n";
  os << section << ".distance_m = " << fmt_double(u.distance_m) << "\n";
  os << section << ".k_db = " << fmt_double(u.k_db) << "\n";
  os << section << ".omega = " << fmt_double(u.omega) << "\n";
  os << section << ".rho0_db = " << fmt_double(u.rho0_db) << "\n";
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() { return ScenarioConfig{}; }

ScenarioConfig ScenarioConfig::from_text(const std::string& text) {
  return from_key_map(parse_key_values(text), ScenarioConfig{});
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void ScenarioConfig::apply_overrides(const std::vector<std::string>& overrides) {
  if (overrides.empty()) {
    check();
    return;
  }
  KeyMap kv;
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + ov);
    const std::string key = trim(ov.substr(0, eq));
    const std::string value = trim(ov.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("override must be section.key=value: " + ov);
    kv[key] = value;
  }
  *this = from_key_map(kv, *this);
}

void ScenarioConfig::check() const {
  if (surface.m_h < 1 || surface.m_v < 1) throw ConfigError("surface.m_h/m_v: must be >= 1");
  if (!(surface.spacing_wavelengths > 0.0)) throw ConfigError("surface.spacing_wavelengths: must be > 0");
  if (!(surface.beta_r >= 0.0) || surface.beta_r > 1.0) throw ConfigError("surface.beta_r: must lie in [0,1]");
  if (!(surface.t_group_fraction >= 0.0) || surface.t_group_fraction > 1.0) {
    throw ConfigError("surface.t_group_fraction: must lie in [0,1]");
  }
  for (const auto* u : {&user_t, &user_r}) {
    if (!(u->distance_m > 0.0)) throw ConfigError("user distance_m: must be > 0");
    if (!(u->alpha > 0.0)) throw ConfigError("user alpha: must be > 0");
    if (!(u->omega > 0.0)) throw ConfigError("user omega: must be > 0");
  }
  if (!(bs.distance_m > 0.0)) throw ConfigError("bs.distance_m: must be > 0");
  if (!(ma.c_t_sq > 0.0) || !(ma.c_r_sq > 0.0) || ma.c_t_sq + ma.c_r_sq > 1.0 + 1e-12) {
    throw ConfigError("ma.c_t_sq/c_r_sq: need both > 0 and sum <= 1");
  }
  if (ma.rate_t < 0.0 || ma.rate_r < 0.0) throw ConfigError("ma.rate_t/rate_r: must be >= 0");
  if (ma.scheme == link::Scheme::noma) {
    if (!(ma.c_r_sq < ma.c_t_sq)) throw ConfigError("ma.c_r_sq: NOMA requires c_r_sq < c_t_sq");
    const double denom = ma.c_t_sq - (std::exp2(ma.rate_t) - 1.0) * ma.c_r_sq;
    if (denom <= 0.0) {
      throw ConfigError("ma.rate_t: infeasible NOMA target rate (c_t_sq - (2^rate_t - 1) c_r_sq <= 0)");
    }
  }
  if (sim.trials < 1) throw ConfigError("sim.trials: must be >= 1");
  if (sim.snr_db.empty()) throw ConfigError("sim.snr_db: empty grid");
  if (!std::is_sorted(sim.snr_db.begin(), sim.snr_db.end())) {
    throw ConfigError("sim.snr_db: grid must be sorted");
  }
  if (sim.m_grid.empty()) throw ConfigError("sim.m_grid: empty grid");
  if (!std::is_sorted(sim.m_grid.begin(), sim.m_grid.end())) {
    throw ConfigError("sim.m_grid: grid must be sorted");
  }
  for (const long m : sim.m_grid) {
    if (m < 1) throw ConfigError("sim.m_grid: element counts must be >= 1");
  }
  if (!(pattern.wavelength_m > 0.0)) throw ConfigError("pattern.wavelength_m: must be > 0");
  if (!(pattern.eval_radius_m > 0.0)) throw ConfigError("pattern.eval_radius_m: must be > 0");
  if (!(pattern.angle_step_deg > 0.0)) throw ConfigError("pattern.angle_step_deg: must be > 0");
}

channel::RicianParams ScenarioConfig::g_params() const {
  channel::RicianParams p;
  p.k_factor = db_to_linear(bs.k_db);
  p.omega = bs.omega;
  p.rho0 = db_to_linear(bs.rho0_db);
  p.distance_m = bs.distance_m;
  p.alpha = bs.alpha;
  return p;
}

channel::RicianParams ScenarioConfig::h_params(User u) const {
  const UserConfig& uc = (u == User::T) ? user_t : user_r;
  channel::RicianParams p;
  p.k_factor = db_to_linear(uc.k_db);
  p.omega = uc.omega;
  p.rho0 = db_to_linear(uc.rho0_db);
  p.distance_m = uc.distance_m;
  p.alpha = uc.alpha;
  return p;
}

double ScenarioConfig::direct_distance_m(User u) const {
  const UserConfig& uc = (u == User::T) ? user_t : user_r;
  const double ab = bs.angle_deg * kPi / 180.0;
  const double au = uc.angle_deg * kPi / 180.0;
  const double dx = bs.distance_m * std::cos(ab) - uc.distance_m * std::cos(au);
  const double dy = bs.distance_m * std::sin(ab) - uc.distance_m * std::sin(au);
  return std::sqrt(dx * dx + dy * dy);
}

std::optional<channel::RicianParams> ScenarioConfig::direct_params(User u) const {
  const UserConfig& uc = (u == User::T) ? user_t : user_r;
  if (!uc.direct.present) return std::nullopt;
  channel::RicianParams d;
  d.k_factor = db_to_linear(uc.direct.k_db);
  if (uc.direct.eta > 0.0) {
    // Scale so that E|h_d| = eta * E|h_m| against this user's element leg.
    const double mu_h = channel::rician_moments(h_params(u)).mu;
    d.omega = 1.0;
    d.rho0 = 1.0;
    d.distance_m = 1.0;
    d.alpha = 1.0;
    const double mu_unit = channel::rician_moments(d).mu;
    const double target = uc.direct.eta * mu_h;
    d.omega = (target / mu_unit) * (target / mu_unit);
  } else {
    d.omega = 1.0;
    d.rho0 = db_to_linear(uc.rho0_db);
    d.distance_m = direct_distance_m(u);
    d.alpha = uc.alpha;
  }
  return d;
}

link::MaConfig ScenarioConfig::ma_config() const {
  link::MaConfig m;
  m.scheme = ma.scheme;
  m.c_t_sq = ma.c_t_sq;
  m.c_r_sq = ma.c_r_sq;
  m.rate_t = ma.rate_t;
  m.rate_r = ma.rate_r;
  m.noise_power = db_to_linear(ma.noise_dbm);  // mW
  m.p_bs = 1.0;
  return m;
}

psc::StrategySpec ScenarioConfig::strategy_spec() const {
  psc::StrategySpec s;
  s.kind = surface.strategy;
  s.beta_r = surface.beta_r;
  s.primary_user = surface.primary_user;
  s.nu_rule = surface.nu_rule;
  s.t_group_fraction = surface.t_group_fraction;
  return s;
}

mc::TrialModel ScenarioConfig::trial_model() const {
  mc::TrialModel m;
  m.m = elements();
  m.g = g_params();
  m.user_t.h = h_params(User::T);
  m.user_t.direct = direct_params(User::T);
  m.user_r.h = h_params(User::R);
  m.user_r.direct = direct_params(User::R);
  m.strategy = strategy_spec();
  m.ma = ma_config();
  m.random_combining = sim.random_outage_model;
  return m;
}

pattern::PatternConfig ScenarioConfig::pattern_config() const {
  pattern::PatternConfig p;
  p.geometry.m_h = surface.m_h;
  p.geometry.m_v = surface.m_v;
  p.geometry.spacing_wavelengths = surface.spacing_wavelengths;
  p.wavelength_m = pattern.wavelength_m;
  p.bs_angle_deg = bs.angle_deg;
  p.bs_distance_m = bs.distance_m;
  p.eval_radius_m = pattern.eval_radius_m;
  p.angle_grid_deg = pattern::angle_grid(pattern.angle_step_deg);
  p.normalize_to_peak = pattern.normalize_to_peak;
  return p;
}

std::string ScenarioConfig::canonical() const {
  std::ostringstream os;
  os << "bs.alpha = " << fmt_double(bs.alpha) << "\n";
  os << "bs.angle_deg = " << fmt_double(bs.angle_deg) << "\n";
  os << "bs.distance_m = " << fmt_double(bs.distance_m) << "\n";
  os << "bs.k_db = " << fmt_double(bs.k_db) << "\n";
  os << "bs.omega = " << fmt_double(bs.omega) << "\n";
  os << "bs.rho0_db = " << fmt_double(bs.rho0_db) << "\n";
  os << "ma.c_r_sq = " << fmt_double(ma.c_r_sq) << "\n";
  os << "ma.c_t_sq = " << fmt_double(ma.c_t_sq) << "\n";
  os << "ma.noise_dbm = " << fmt_double(ma.noise_dbm) << "\n";
  os << "ma.rate_r = " << fmt_double(ma.rate_r) << "\n";
  os << "ma.rate_t = " << fmt_double(ma.rate_t) << "\n";
  os << "ma.scheme = " << (ma.scheme == link::Scheme::oma ? "oma" : "noma") << "\n";
  os << "pattern.angle_step_deg = " << fmt_double(pattern.angle_step_deg) << "\n";
  os << "pattern.eval_radius_m = " << fmt_double(pattern.eval_radius_m) << "\n";
  os << "pattern.normalize_to_peak = " << (pattern.normalize_to_peak ? "true" : "false") << "\n";
  os << "pattern.wavelength_m = " << fmt_double(pattern.wavelength_m) << "\n";
  os << "sim.m_grid = ";
  for (std::size_t i = 0; i < sim.m_grid.size(); ++i) {
    os << (i ? "," : "") << sim.m_grid[i];
  }
  os << "\n";
  os << "sim.random_outage_model = "
     << (sim.random_outage_model == mc::Combining::power_sum ? "resolvable" : "coherent") << "\n";
  os << "sim.seed = " << sim.seed << "\n";
  os << "sim.snr_db = ";
  for (std::size_t i = 0; i < sim.snr_db.size(); ++i) {
    os << (i ? "," : "") << fmt_double(sim.snr_db[i]);
  }
  os << "\n";
  os << "sim.trials = " << sim.trials << "\n";
  os << "sim.workers = " << sim.workers << "\n";
  os << "surface.beta_r = " << fmt_double(surface.beta_r) << "\n";
  os << "surface.m_h = " << surface.m_h << "\n";
  os << "surface.m_v = " << surface.m_v << "\n";
  os << "surface.nu_rule = "
     << (surface.nu_rule == psc::NuRule::closest ? "closest" : "literal") << "\n";
  os << "surface.primary_user = " << (surface.primary_user == User::R ? "R" : "T") << "\n";
  os << "surface.spacing_wavelengths = " << fmt_double(surface.spacing_wavelengths) << "\n";
  os << "surface.strategy = " << psc::kind_name(surface.strategy) << "\n";
  os << "surface.t_group_fraction = " << fmt_double(surface.t_group_fraction) << "\n";
  std::ostringstream users;
  append_user(users, "user_r", user_r);
  append_user(users, "user_t", user_t);
  os << users.str();
  return os.str();
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string text = cfg.canonical();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace starsim::scenario
