#pragma once

// Real-order upper incomplete gamma function
//
//     Gamma(alpha, x) = integral_x^inf e^{-s} s^{alpha-1} ds
//
// including the non-positive orders that appear in Gompertz annuity factors
// (alpha = -r/g). Evaluation strategy, by region:
//
//   * alpha == 0                       exponential integral E1(x)
//   * x >= max(1, alpha + 1)           Legendre continued fraction (any alpha)
//   * alpha > 1/2, x < alpha + 1       Gamma(alpha) - lower series
//   * otherwise (alpha <= 1/2, x small) shift the order to a0 in [-1/2, 1/2],
//                                      evaluate the small-order series, then
//                                      apply Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a
//                                      downward; the recurrence is stable there
//                                      because each step scales errors by ~x/|a| < 2.
//
// The small-order series is written so that it is smooth through a0 = 0:
//
//     Gamma(a, x) = [Gamma(1+a) - 1]/a - expm1(a ln x)/a
//                   - sum_{n>=1} (-1)^n x^{a+n} / (n! (a+n))
//
// Target accuracy is 1e-10 relative for alpha in [-30, 30], x in (1e-8, 50].
// All functions are pure and thread-safe.

namespace longevity::specfun {

// Gamma(alpha, x). Throws DomainError for non-finite input, x < 0, or x == 0
// with alpha <= 0, and when the result is not representable.
double upper_incomplete_gamma(double alpha, double x);

// Gamma(alpha, x) * e^x * x^-alpha. This is the quantity the continued
// fraction produces directly, and it stays O(1) where Gamma itself under- or
// overflows (large x). Requires x > 0.
double upper_incomplete_gamma_scaled(double alpha, double x);

// E1(x) = Gamma(0, x) for x > 0.
double exponential_integral_e1(double x);

// ln Gamma(1 + a) for |a| <= 1/2, accurate to a few ulp in the relative sense
// close to a = 0 (where lgamma(1 + a) loses the low bits of a).
double log_gamma_1p(double a);

}  // namespace longevity::specfun
