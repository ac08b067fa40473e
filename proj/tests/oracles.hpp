#ifndef SUPKERN_TESTS_ORACLES_HPP
#define SUPKERN_TESTS_ORACLES_HPP

// Independent oracles used by the test suites.  Everything here is computed
// from textbook representations, not through the library code paths it checks.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// Adaptive Simpson on [a,b].
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// K_nu(x) by quadrature of the integral representation
//   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
inline double bessel_k_quadrature(double nu, double x) {
    if (!(x > 0)) throw std::invalid_argument("bessel_k_quadrature: x <= 0");
    nu = std::abs(nu);
    // upper limit: integrand below ~1e-320 relative once x cosh t - nu t > 740+log-scale
    double T = 1.0;
    while (x * std::cosh(T) - nu * T < 760.0 && T < 800.0) T += 0.5;
    auto f = [&](double t) {
        const double e = -x * std::cosh(t) + std::log(std::cosh(nu * t));
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    // split at the maximum region for the adaptive rule
    const double guess = nu > 0 ? std::asinh(nu / x) : 0.5;
    const double split = std::min(std::max(guess, 1e-3), T - 1e-3);
    // scale the tolerance by the integrand's magnitude
    double peak = 0.0;
    for (double t = 0.0; t <= T; t += 0.125 * T) peak = std::max(peak, f(t));
    const double tol = std::max(peak, 1e-300) * 1e-13;
    return integrate(f, 0.0, split, tol) + integrate(f, split, T, tol);
}

}  // namespace oracles

#endif
