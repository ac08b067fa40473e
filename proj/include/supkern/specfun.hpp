#ifndef SUPKERN_SPECFUN_HPP
#define SUPKERN_SPECFUN_HPP

#include "supkern/params.hpp"

namespace supkern {

// Modified Bessel function of the second kind, real order.
//
// The evaluation follows the classic SLATEC splitting: Temme's series for
// x <= 2, the Miller algorithm for 2 < x <= 17, and the large-argument
// asymptotic expansion beyond, reduced to |order mod 1| <= 1/2 plus forward
// recurrence.  Intended for moderate orders (|nu| up to ~50); the toolkit
// itself only uses (d-2)/(2*beta) and (d-2-2*beta)/(2*beta).

/// K_nu(x) for x > 0.  Underflows gracefully to 0 for large x.
double bessel_k(double nu, double x);

/// exp(x) * K_nu(x); finite over the whole usable range of x.
double bessel_k_scaled(double nu, double x);

/// log K_nu(x); stays usable where K_nu itself underflows (x up to ~1e308).
double log_bessel_k(double nu, double x);

/// Gaussian heat kernel q(t,x,y) = (4 pi t)^{-d/2} exp(-|x-y|^2/(4t)).
double gaussian_q(int d, double t, const Point& x, const Point& y);
double gaussian_q_r(int d, double t, double dist);
double log_gaussian_q_r(int d, double t, double dist);

/// Shifted logarithm Log r = log(e - 1 + r), r >= 0.
double log_shift(double r);

}  // namespace supkern

#endif
