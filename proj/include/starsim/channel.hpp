// SPDX-License-Identifier: Apache-2.0
//
// Rician fading model: parameterization, amplitude moments, seeded sampling,
// and the distribution of the product of two independent Rician envelopes
// (the per-element cascaded channel).

#pragma once

#include <Eigen/Core>
#include <complex>

#include "starsim/rng.hpp"

namespace starsim {

/// Which side of the surface a user sits on.
enum class User { T, R };

namespace channel {

/// Parameters of one Rician link. All values linear (dB conversions happen
/// at the configuration boundary only). The effective mean-square gain of
/// the link is rho0 * distance^-alpha * omega.
struct RicianParams {
  double k_factor = 0.0;    // Rician K, linear, >= 0
  double omega = 1.0;       // E|h|^2 of the small-scale part
  double rho0 = 1.0;        // path loss at 1 m reference, linear
  double distance_m = 1.0;  // link distance
  double alpha = 2.0;       // path loss exponent

  /// Distance-scaled scale parameter: E|h|^2 including path loss.
  double effective_omega() const;

  /// Throws std::invalid_argument when a field is out of range.
  void check() const;
};

/// First and second moments of the link amplitude |h| (distance-scaled).
struct Moments {
  double mu = 0.0;     // E|h|
  double var = 0.0;    // Var|h|
  double omega = 0.0;  // E|h|^2 = var + mu^2
};

/// One draw of every channel coefficient in the system. Direct links are
/// zero when blocked.
struct ChannelRealization {
  Eigen::ArrayXcd g;    // BS -> element m
  Eigen::ArrayXcd h_t;  // element m -> user T
  Eigen::ArrayXcd h_r;  // element m -> user R
  std::complex<double> h_d_t{0.0, 0.0};
  std::complex<double> h_d_r{0.0, 0.0};

  Eigen::Index elements() const { return g.size(); }
  const Eigen::ArrayXcd& h(User u) const { return u == User::T ? h_t : h_r; }
  std::complex<double> h_d(User u) const { return u == User::T ? h_d_t : h_d_r; }
};

/// mu = (1/2) sqrt(pi W / (K+1)) L_{1/2}(-K), var = W - mu^2, with W the
/// distance-scaled omega.
Moments rician_moments(const RicianParams& p);

/// n i.i.d. draws of the link coefficient. The LoS component is a
/// unit-modulus phasor with a fresh uniform phase per draw; the NLoS part is
/// circularly symmetric Gaussian. Bit-reproducible for a given stream state;
/// every draw consumes exactly 3 words. n = 0 yields an empty vector.
Eigen::ArrayXcd sample(const RicianParams& p, rng::Stream& stream, Eigen::Index n);

/// PDF of beta * |g| * |h| at x > 0 (product of two independent Rician
/// envelopes, scaled). Double power series with modified-Bessel-K kernels,
/// truncated at 40x40 terms (converged below 1e-10 tails for K <= 20).
/// Throws std::domain_error for x <= 0.
double cascaded_pdf(double x, const RicianParams& p_h, const RicianParams& p_g, double beta);

/// CDF of beta * |g| * |h| at x >= 0 by adaptive quadrature of cascaded_pdf.
double cascaded_cdf(double x, const RicianParams& p_h, const RicianParams& p_g, double beta);

/// Coefficient C of the small-argument law f(x) ~ C x:
///   C = e^{-(K_h+K_g)} / (beta^2 b_h b_g),  b = Omega / (2 (K+1)).
double cascaded_asymptote_slope(const RicianParams& p_h, const RicianParams& p_g, double beta);

}  // namespace channel
}  // namespace starsim
