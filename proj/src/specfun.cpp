// SPDX-License-Identifier: Apache-2.0

#include "starsim/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace starsim::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
}

// Ascending series for I_nu, nu in {0,1}. All terms positive, no cancellation.
double bessel_i_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = (nu == 0) ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// Asymptotic expansion of exp(-x) I_nu(x) for large x; summed to the smallest
// term, which is below 1e-13 relative for x >= 18.
double bessel_i_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = term;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) >= prev) break;  // asymptotic tail started growing
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double bessel_i_scaled_impl(int nu, double x) {
  if (x < 18.0) return bessel_i_series(nu, x) * std::exp(-x);
  return bessel_i_asymptotic_scaled(nu, x);
}

double bessel_i_impl(int nu, double x) {
  if (x < 18.0) return bessel_i_series(nu, x);
  return bessel_i_asymptotic_scaled(nu, x) * std::exp(x);
}

// K0 and K1 for 0 < x <= 2 from the standard logarithmic series.
void bessel_k01_series(double x, double& k0, double& k1) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x) + kEulerGamma;

  // K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
  double term = 1.0;
  double hk = 0.0;
  double sum0 = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    sum0 += term * hk;
    if (term * hk < 1e-18 * (std::abs(sum0) + 1.0)) break;
  }
  k0 = -lg * bessel_i_series(0, x) + sum0;

  // K1 = 1/x + (ln(x/2)+gamma) I1 - (x/4) sum_k (H_k + H_{k+1}) q^k / (k!(k+1)!)
  term = 1.0;
  double hk1 = 1.0;
  hk = 0.0;
  double sum1 = term * (hk + hk1);
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1);
    const double add = term * (hk + hk1);
    sum1 += add;
    if (add < 1e-18 * sum1) break;
  }
  k1 = 1.0 / x + lg * bessel_i_series(1, x) - 0.25 * x * sum1;
}

// Steed/Temme continued fraction (CF2) for K0 and K1, x > 2.
void bessel_k01_cf2(double x, double& k0, double& k1) {
  constexpr double eps = 1e-16;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;  // 0.25 - mu^2 with mu = 0
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) break;
  }
  h = a1 * h;
  k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

// Regularized incomplete gamma functions P(s,x), Q(s,x), NR-style series and
// continued fraction with a log-scaled prefactor; stable for large s.
double gamma_p_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cf(double s, double x) {
  constexpr double fpmin = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

// Q(s,x) = Gamma(s,x)/Gamma(s), upper regularized.
double gamma_q(double s, double x) {
  if (x <= 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

// P(s,x) = 1 - Q(s,x), lower regularized, stable for small x.
double gamma_p(double s, double x) {
  if (x <= 0.0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_cf(s, x);
}

double pois_log_pmf(long n, double lambda) {
  return -lambda + n * std::log(lambda) - std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

double bessel_i0(double x) {
  require_finite(x, "bessel_i0");
  return bessel_i_impl(0, std::abs(x));
}

double bessel_i0_scaled(double x) {
  require_finite(x, "bessel_i0_scaled");
  return bessel_i_scaled_impl(0, std::abs(x));
}

double bessel_i1(double x) {
  require_finite(x, "bessel_i1");
  const double v = bessel_i_impl(1, std::abs(x));
  return x < 0.0 ? -v : v;
}

double bessel_i1_scaled(double x) {
  require_finite(x, "bessel_i1_scaled");
  const double v = bessel_i_scaled_impl(1, std::abs(x));
  return x < 0.0 ? -v : v;
}

double bessel_k(int n, double x) {
  require_finite(x, "bessel_k");
  if (x <= 0.0) throw std::domain_error("bessel_k: requires x > 0");
  if (n < 0) n = -n;  // K_{-n} = K_n
  double k0, k1;
  if (x <= 2.0) {
    bessel_k01_series(x, k0, k1);
  } else {
    bessel_k01_cf2(x, k0, k1);
  }
  if (n == 0) return k0;
  if (n == 1) return k1;
  // Upward recurrence, stable for K.
  double km = k0;
  double kc = k1;
  for (int j = 1; j < n; ++j) {
    const double kn = km + (2.0 * j / x) * kc;
    km = kc;
    kc = kn;
    if (!std::isfinite(kc)) return std::numeric_limits<double>::infinity();
  }
  return kc;
}

double marcum_q1(double a, double b) {
  require_finite(a, "marcum_q1");
  require_finite(b, "marcum_q1");
  if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q1: requires a, b >= 0");
  if (b == 0.0) return 1.0;

  const double lambda = 0.5 * a * a;  // Poisson intensity of the mixture
  const double x = 0.5 * b * b;       // Erlang tail argument
  if (a == 0.0) return std::exp(-x);

  if (lambda <= 600.0 && x <= 600.0) {
    // Q1 = sum_n pois(n; lambda) * P{Erlang(n+1) tail at x}, both streams
    // accumulated incrementally. The neglected tail mass is bounded by the
    // remaining Poisson probability.
    double p = std::exp(-lambda);  // pois(0)
    double g = std::exp(-x);       // x^0 e^-x / 0!
    double cum = g;                // Q(1, x)
    double sum = p * cum;
    double remaining = 1.0 - p;
    for (long n = 1; n < 100000; ++n) {
      p *= lambda / n;
      g *= x / n;
      cum += g;
      sum += p * cum;
      remaining -= p;
      if (remaining < 1e-14) break;
    }
    return std::min(1.0, std::max(0.0, sum));
  }

  // Large-parameter regime: sum over a window of the Poisson mode with the
  // Erlang tail evaluated through the regularized incomplete gamma.
  const double sd = std::sqrt(lambda);
  const long lo = std::max<long>(0, static_cast<long>(std::floor(lambda - 14.0 * sd)) - 5);
  const long hi = static_cast<long>(std::ceil(lambda + 14.0 * sd)) + 20;
  double sum = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const double w = std::exp(pois_log_pmf(n, lambda));
    if (w < 1e-300) continue;
    sum += w * gamma_q(static_cast<double>(n) + 1.0, x);
  }
  return std::min(1.0, std::max(0.0, sum));
}

double marcum_q1_complement(double a, double b) {
  require_finite(a, "marcum_q1_complement");
  require_finite(b, "marcum_q1_complement");
  if (a < 0.0 || b < 0.0) {
    throw std::domain_error("marcum_q1_complement: requires a, b >= 0");
  }
  if (b == 0.0) return 0.0;
  const double lambda = 0.5 * a * a;
  const double x = 0.5 * b * b;
  if (a == 0.0) return -std::expm1(-x);

  if (lambda <= 600.0 && x <= 700.0) {
    // 1 - Q1 = sum_n pois(n; lambda) P(n+1, x), all terms positive, with
    // P(n+1, x) = P(n, x) - e^{-x} x^n / n! decreasing in n.
    double p = std::exp(-lambda);
    double g = std::exp(-x);
    double cum = -std::expm1(-x);  // P(1, x)
    double gx = g;                 // e^{-x} x^n / n! at n = 0
    double sum = p * cum;
    double remaining = 1.0 - p;
    for (long n = 1; n < 100000; ++n) {
      gx *= x / n;  // e^{-x} x^n / n!
      cum -= gx;    // P(n+1, x) = P(n, x) - e^{-x} x^n / n!
      if (cum < 0.0) cum = 0.0;
      p *= lambda / n;
      sum += p * cum;
      remaining -= p;
      // cum decreases in n, so the neglected tail is below remaining * cum.
      if (remaining * cum < 1e-16 * sum || remaining < 1e-300) break;
    }
    return std::min(1.0, sum);
  }

  const double sd = std::sqrt(lambda);
  const long lo = std::max<long>(0, static_cast<long>(std::floor(lambda - 14.0 * sd)) - 5);
  const long hi = static_cast<long>(std::ceil(lambda + 14.0 * sd)) + 20;
  double sum = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const double w = std::exp(pois_log_pmf(n, lambda));
    if (w < 1e-300) continue;
    sum += w * gamma_p(static_cast<double>(n) + 1.0, x);
  }
  return std::min(1.0, std::max(0.0, sum));
}

double laguerre_half(double x) {
  require_finite(x, "laguerre_half");
  if (x > 0.0) throw std::domain_error("laguerre_half: supported only for x <= 0");
  const double k = -x;
  return (1.0 + k) * bessel_i0_scaled(0.5 * k) + k * bessel_i1_scaled(0.5 * k);
}

double sinc_u(double x) {
  require_finite(x, "sinc_u");
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace starsim::specfun
