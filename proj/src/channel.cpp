// SPDX-License-Identifier: Apache-2.0

#include "starsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "starsim/specfun.hpp"

namespace starsim::channel {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ProductSeries {
  double b_h, b_g;  // Omega / (2 (K+1)) per leg
  double c_h, c_g;  // K (K+1) / Omega per leg, series growth factors
  double k_sum;     // K_h + K_g
};

ProductSeries make_series(const RicianParams& p_h, const RicianParams& p_g) {
  p_h.check();
  p_g.check();
  const double wh = p_h.effective_omega();
  const double wg = p_g.effective_omega();
  ProductSeries s;
  s.b_h = wh / (2.0 * (p_h.k_factor + 1.0));
  s.b_g = wg / (2.0 * (p_g.k_factor + 1.0));
  s.c_h = p_h.k_factor * (p_h.k_factor + 1.0) / wh;
  s.c_g = p_g.k_factor * (p_g.k_factor + 1.0) / wg;
  s.k_sum = p_h.k_factor + p_g.k_factor;
  return s;
}

// PDF of the unscaled product z = |g| |h|.
double product_pdf(double z, const ProductSeries& s) {
  constexpr int kMaxOrder = 40;
  const double w = z / std::sqrt(s.b_h * s.b_g);  // Bessel-K argument
  if (w > 600.0) return 0.0;  // below 1e-250 for any parameter set

  // log K_n(w) for n = 0..kMaxOrder via the stable log-space recurrence.
  double lk[2 * kMaxOrder + 1];
  lk[0] = std::log(specfun::bessel_k(0, w));
  lk[1] = std::log(specfun::bessel_k(1, w));
  for (int n = 2; n <= kMaxOrder; ++n) {
    lk[n] = lk[n - 1] + std::log(2.0 * (n - 1) / w + std::exp(lk[n - 2] - lk[n - 1]));
  }

  const double lzh = (s.c_h > 0.0) ? std::log(s.c_h * z) : 0.0;
  const double lzg = (s.c_g > 0.0) ? std::log(s.c_g * z) : 0.0;
  const double lratio = 0.5 * std::log(s.b_h / s.b_g);

  double sum = 0.0;
  for (int i = 0; i <= kMaxOrder; ++i) {
    if (i > 0 && s.c_h <= 0.0) break;
    const double li = i * lzh - 2.0 * std::lgamma(i + 1.0);
    for (int l = 0; l <= kMaxOrder; ++l) {
      if (l > 0 && s.c_g <= 0.0) break;
      const double lt = li + l * lzg - 2.0 * std::lgamma(l + 1.0) +
                        (i - l) * lratio + lk[std::abs(i - l)];
      sum += std::exp(lt);
    }
  }
  return z / (s.b_h * s.b_g) * std::exp(-s.k_sum) * sum;
}

}  // namespace

double RicianParams::effective_omega() const {
  return rho0 * std::pow(distance_m, -alpha) * omega;
}

void RicianParams::check() const {
  if (!(k_factor >= 0.0) || !std::isfinite(k_factor)) {
    throw std::invalid_argument("RicianParams: k_factor must be finite and >= 0");
  }
  if (!(omega > 0.0) || !(rho0 > 0.0) || !(distance_m > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("RicianParams: omega, rho0, distance_m, alpha must be > 0");
  }
}

Moments rician_moments(const RicianParams& p) {
  p.check();
  const double w = p.effective_omega();
  const double k = p.k_factor;
  Moments m;
  m.mu = 0.5 * std::sqrt(kPi * w / (k + 1.0)) * specfun::laguerre_half(-k);
  m.omega = w;
  m.var = w - m.mu * m.mu;
  return m;
}

Eigen::ArrayXcd sample(const RicianParams& p, rng::Stream& stream, Eigen::Index n) {
  p.check();
  if (n < 0) throw std::invalid_argument("sample: n must be >= 0");
  const double w = p.effective_omega();
  const double a_los = std::sqrt(w * p.k_factor / (p.k_factor + 1.0));
  const double a_nlos = std::sqrt(w / (p.k_factor + 1.0));
  Eigen::ArrayXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double theta = stream.angle();
    const std::complex<double> nlos = stream.complex_gaussian();
    out[i] = a_los * std::complex<double>(std::cos(theta), std::sin(theta)) + a_nlos * nlos;
  }
  return out;
}

double cascaded_pdf(double x, const RicianParams& p_h, const RicianParams& p_g, double beta) {
  if (!(x > 0.0)) throw std::domain_error("cascaded_pdf: requires x > 0");
  if (!(beta > 0.0) || beta > 1.0) throw std::invalid_argument("cascaded_pdf: beta in (0,1]");
  const ProductSeries s = make_series(p_h, p_g);
  return product_pdf(x / beta, s) / beta;
}

double cascaded_cdf(double x, const RicianParams& p_h, const RicianParams& p_g, double beta) {
  if (x <= 0.0) return 0.0;
  if (!(beta > 0.0) || beta > 1.0) throw std::invalid_argument("cascaded_cdf: beta in (0,1]");
  const ProductSeries s = make_series(p_h, p_g);
  const double z_hi = x / beta;

  // Composite adaptive Simpson on f_Z over [0, z_hi]; the integrand vanishes
  // linearly (with a mild log factor) at 0, so plain refinement converges.
  struct Simpson {
    const ProductSeries& s;
    double eval(double z) const { return z <= 0.0 ? 0.0 : product_pdf(z, s); }
    double recurse(double a, double fa, double b, double fb, double fm, double whole,
                   double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = eval(lm);
      const double frm = eval(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
      }
      return recurse(a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
             recurse(m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
    }
  } simpson{s};

  const double fa = 0.0;
  const double fb = simpson.eval(z_hi);
  const double fm = simpson.eval(0.5 * z_hi);
  const double whole = z_hi / 6.0 * (fa + 4.0 * fm + fb);
  const double cdf = simpson.recurse(0.0, fa, z_hi, fb, fm, whole, 1e-11, 28);
  return std::min(1.0, std::max(0.0, cdf));
}

double cascaded_asymptote_slope(const RicianParams& p_h, const RicianParams& p_g, double beta) {
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::invalid_argument("cascaded_asymptote_slope: beta in (0,1]");
  }
  const ProductSeries s = make_series(p_h, p_g);
  return std::exp(-s.k_sum) / (beta * beta * s.b_h * s.b_g);
}

}  // namespace starsim::channel
