// SPDX-License-Identifier: Apache-2.0

#include "starsim/psc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace starsim::psc {

namespace {

constexpr double kPi = 3.14159265358979323846;

using surface::wrap_pm_pi;
using surface::wrap_two_pi;

double arg_or_zero(std::complex<double> z) {
  // Reference phase convention: a blocked direct link contributes phase 0
  // (only relative alignment matters when h_d = 0).
  if (z == std::complex<double>(0.0, 0.0)) return 0.0;
  return std::arg(z);
}

/// Cophase target for one user: wrap(angle(h_d) - angle(h_m) - angle(g_m)).
Eigen::ArrayXd cophase_targets(const channel::ChannelRealization& ch, User u) {
  const Eigen::Index m = ch.elements();
  const double phi0 = arg_or_zero(ch.h_d(u));
  const Eigen::ArrayXcd& h = ch.h(u);
  Eigen::ArrayXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out[i] = wrap_two_pi(phi0 - std::arg(h[i]) - std::arg(ch.g[i]));
  }
  return out;
}

surface::SurfaceCoefficients make_common_amplitudes(Eigen::Index m, double beta_r) {
  surface::SurfaceCoefficients c;
  c.beta_r = Eigen::ArrayXd::Constant(m, beta_r);
  c.beta_t = Eigen::ArrayXd::Constant(m, std::sqrt(std::max(0.0, 1.0 - beta_r * beta_r)));
  c.phi_t.resize(m);
  c.phi_r.resize(m);
  c.nu.assign(m, 0);
  return c;
}

}  // namespace

void StrategySpec::check(Eigen::Index m) const {
  if (!(beta_r >= 0.0) || beta_r > 1.0) {
    throw std::invalid_argument("StrategySpec: beta_r must lie in [0,1]");
  }
  if (!(t_group_fraction >= 0.0) || t_group_fraction > 1.0) {
    throw std::invalid_argument("StrategySpec: t_group_fraction must lie in [0,1]");
  }
  if (kind == Kind::tr && t_group) {
    for (const Eigen::Index i : *t_group) {
      if (i < 0 || i >= m) {
        throw std::invalid_argument("StrategySpec: t_group index out of range");
      }
    }
  }
}

Eigen::Index StrategySpec::t_group_size(Eigen::Index m) const {
  if (t_group) return static_cast<Eigen::Index>(t_group->size());
  return static_cast<Eigen::Index>(std::floor(m * t_group_fraction));
}

surface::SurfaceCoefficients ps_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec) {
  const Eigen::Index m = ch.elements();
  spec.check(m);
  const User pri = spec.primary_user;
  const User sec = (pri == User::R) ? User::T : User::R;

  const Eigen::ArrayXd phi_pri = cophase_targets(ch, pri);
  const double phi_sec_direct = arg_or_zero(ch.h_d(sec));
  const Eigen::ArrayXd phi_sec_target =
      (spec.nu_rule == NuRule::closest) ? cophase_targets(ch, sec) : Eigen::ArrayXd();

  surface::SurfaceCoefficients c = make_common_amplitudes(m, spec.beta_r);
  for (Eigen::Index i = 0; i < m; ++i) {
    // The coupling fixes the secondary phase up to the auxiliary bit:
    // reflection leads transmission by pi/2 (nu=0) or 3pi/2 (nu=1).
    std::uint8_t nu;
    if (spec.nu_rule == NuRule::literal) {
      nu = (wrap_two_pi(phi_pri[i] - phi_sec_direct) < kPi) ? 0 : 1;
    } else {
      const double cand0 = (pri == User::R) ? phi_pri[i] - 0.5 * kPi : phi_pri[i] + 0.5 * kPi;
      const double cand1 = (pri == User::R) ? phi_pri[i] - 1.5 * kPi : phi_pri[i] + 1.5 * kPi;
      const double r0 = std::abs(wrap_pm_pi(cand0 - phi_sec_target[i]));
      const double r1 = std::abs(wrap_pm_pi(cand1 - phi_sec_target[i]));
      nu = (r0 <= r1) ? 0 : 1;
    }
    const double shift = 0.5 * kPi + nu * kPi;
    if (pri == User::R) {
      c.phi_r[i] = phi_pri[i];
      c.phi_t[i] = wrap_two_pi(phi_pri[i] - shift);
    } else {
      c.phi_t[i] = phi_pri[i];
      c.phi_r[i] = wrap_two_pi(phi_pri[i] + shift);
    }
    c.nu[i] = nu;
  }
  return c;
}

surface::SurfaceCoefficients dp_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec) {
  const Eigen::Index m = ch.elements();
  spec.check(m);
  const Eigen::ArrayXd d_r = cophase_targets(ch, User::R);
  const Eigen::ArrayXd d_t = cophase_targets(ch, User::T);

  surface::SurfaceCoefficients c = make_common_amplitudes(m, spec.beta_r);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double diff = d_r[i] - d_t[i];  // in (-2pi, 2pi)
    const double mid = 0.5 * (d_r[i] + d_t[i]);
    double phi_t, phi_r;
    std::uint8_t nu;
    if (diff >= 0.0 && diff < kPi) {
      phi_t = mid - 0.25 * kPi;
      phi_r = mid + 0.25 * kPi;
      nu = 0;
    } else if (diff >= kPi) {
      phi_t = mid - 0.75 * kPi;
      phi_r = mid + 0.75 * kPi;
      nu = 1;
    } else if (diff >= -kPi) {  // [-pi, 0)
      phi_t = mid + 0.25 * kPi;
      phi_r = mid - 0.25 * kPi;
      nu = 1;
    } else {  // (-2pi, -pi)
      phi_t = mid + 0.75 * kPi;
      phi_r = mid - 0.75 * kPi;
      nu = 0;
    }
    c.phi_t[i] = wrap_two_pi(phi_t);
    c.phi_r[i] = wrap_two_pi(phi_r);
    c.nu[i] = nu;
  }
  return c;
}

surface::SurfaceCoefficients tr_psc(const channel::ChannelRealization& ch,
                                    const StrategySpec& spec) {
  const Eigen::Index m = ch.elements();
  spec.check(m);
  const std::vector<Eigen::Index> group =
      spec.t_group ? *spec.t_group : default_t_group(m, spec.t_group_fraction);
  std::vector<bool> transmits(m, false);
  for (const Eigen::Index i : group) transmits[i] = true;

  const Eigen::ArrayXd d_r = cophase_targets(ch, User::R);
  const Eigen::ArrayXd d_t = cophase_targets(ch, User::T);

  surface::SurfaceCoefficients c;
  c.beta_t.resize(m);
  c.beta_r.resize(m);
  c.phi_t.resize(m);
  c.phi_r.resize(m);
  c.nu.assign(m, 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (transmits[i]) {
      c.beta_t[i] = 1.0;
      c.beta_r[i] = 0.0;
      c.phi_t[i] = d_t[i];
      c.phi_r[i] = wrap_two_pi(d_t[i] + 0.5 * kPi);  // bookkeeping companion
    } else {
      c.beta_r[i] = 1.0;
      c.beta_t[i] = 0.0;
      c.phi_r[i] = d_r[i];
      c.phi_t[i] = wrap_two_pi(d_r[i] - 0.5 * kPi);
    }
  }
  return c;
}

surface::SurfaceCoefficients random_psc(const StrategySpec& spec, rng::Stream& stream,
                                        Eigen::Index m) {
  spec.check(m);
  surface::SurfaceCoefficients c = make_common_amplitudes(m, spec.beta_r);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double phi_r = stream.angle();
    const std::uint8_t nu = stream.coin() ? 1 : 0;
    c.phi_r[i] = wrap_two_pi(phi_r);
    c.phi_t[i] = wrap_two_pi(phi_r - 0.5 * kPi - nu * kPi);
    c.nu[i] = nu;
  }
  return c;
}

surface::SurfaceCoefficients independent_psc(const channel::ChannelRealization& ch,
                                             const StrategySpec& spec) {
  const Eigen::Index m = ch.elements();
  spec.check(m);
  const Eigen::ArrayXd d_r = cophase_targets(ch, User::R);
  const Eigen::ArrayXd d_t = cophase_targets(ch, User::T);
  surface::SurfaceCoefficients c = make_common_amplitudes(m, spec.beta_r);
  for (Eigen::Index i = 0; i < m; ++i) {
    c.phi_r[i] = d_r[i];
    c.phi_t[i] = d_t[i];
    c.nu[i] = (wrap_two_pi(d_r[i] - d_t[i]) < kPi) ? 0 : 1;  // nearest branch
  }
  return c;
}

surface::SurfaceCoefficients configure(const channel::ChannelRealization& ch,
                                       const StrategySpec& spec, rng::Stream& stream) {
  switch (spec.kind) {
    case Kind::ps:
      return ps_psc(ch, spec);
    case Kind::dp:
      return dp_psc(ch, spec);
    case Kind::tr:
      return tr_psc(ch, spec);
    case Kind::random:
      return random_psc(spec, stream, ch.elements());
    case Kind::independent:
      return independent_psc(ch, spec);
  }
  throw std::invalid_argument("configure: unknown strategy kind");
}

std::vector<Eigen::Index> default_t_group(Eigen::Index m, double fraction) {
  if (!(fraction >= 0.0) || fraction > 1.0) {
    throw std::invalid_argument("default_t_group: fraction in [0,1]");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(std::floor(m * fraction));
  std::vector<Eigen::Index> group(n);
  for (Eigen::Index i = 0; i < n; ++i) group[i] = i;
  return group;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::ps: return "ps";
    case Kind::dp: return "dp";
    case Kind::tr: return "tr";
    case Kind::random: return "random";
    case Kind::independent: return "independent";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "ps") return Kind::ps;
  if (name == "dp") return Kind::dp;
  if (name == "tr") return Kind::tr;
  if (name == "random") return Kind::random;
  if (name == "independent") return Kind::independent;
  throw std::invalid_argument("unknown strategy: " + name);
}

}  // namespace starsim::psc
