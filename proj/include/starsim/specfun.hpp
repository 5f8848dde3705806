// SPDX-License-Identifier: Apache-2.0
//
// Numerically robust special functions used by the closed-form channel
// statistics: modified Bessel functions of the first and second kind, the
// first-order Marcum Q-function, the Laguerre function of order 1/2, and the
// unnormalized sinc.
//
// All routines are pure and reentrant. Accuracy targets:
//   bessel_i0 / bessel_i1   relative error < 1e-10 on x >= 0
//   bessel_k                relative error < 1e-8  on x > 0
//   marcum_q1               absolute error < 1e-9
//   laguerre_half           relative error < 1e-10 on x <= 0

#pragma once

namespace starsim::specfun {

/// Modified Bessel function of the first kind, order 0.
/// Power series for small arguments, asymptotic expansion beyond. Overflows
/// (returns +inf) for x > ~709; use bessel_i0_scaled in exponential products.
double bessel_i0(double x);

/// exp(-|x|) * I0(x). Stable for arbitrarily large arguments.
double bessel_i0_scaled(double x);

/// Modified Bessel function of the first kind, order 1. Odd in x.
double bessel_i1(double x);

/// exp(-|x|) * I1(x).
double bessel_i1_scaled(double x);

/// Modified Bessel function of the second kind of integer order n >= 0.
/// K0/K1 via series (x <= 2) or a Steed/Temme continued fraction (x > 2),
/// then stable upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n.
/// Throws std::domain_error for x <= 0.
double bessel_k(int n, double x);

/// First-order Marcum Q-function
///   Q1(a,b) = Integral_b^inf x exp(-(x^2+a^2)/2) I0(a x) dx,
/// evaluated by the canonical Poisson-weighted series of Erlang tails
/// (never by quadrature). Result in [0,1]. Requires a, b >= 0 and finite.
double marcum_q1(double a, double b);

/// 1 - Q1(a, b), summed directly from lower-gamma terms so the deep left
/// tail (values down to ~1e-300) keeps full relative accuracy instead of
/// cancelling against 1.
double marcum_q1_complement(double a, double b);

/// Laguerre function L_{1/2}(x) for x <= 0, via the closed identity
///   L_{1/2}(-K) = e^{-K/2} [ (1+K) I0(K/2) + K I1(K/2) ],  K = -x >= 0,
/// computed with scaled Bessel functions so it is stable for any K.
/// Throws std::domain_error for x > 0 (unsupported range).
double laguerre_half(double x);

/// Unnormalized sinc: sin(x)/x, continuous at 0 with value 1.
double sinc_u(double x);

}  // namespace starsim::specfun
