#include "supkern/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace supkern {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("envelope: radius must be positive and finite");
}

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("envelope: time must be positive and finite");
}

double bessel_arg(const ModelParams& p, double r) {
    return std::sqrt(p.kappa) / (p.beta * pow_pos(r, p.beta));
}

void check_point(const Point& x) {
    if (x.norm2() == 0.0) throw std::invalid_argument("envelope: point must be nonzero");
}

// d=1 sign bookkeeping: envelopes vanish identically across the origin.
bool opposite_sides_1d(const ModelParams& p, const Point& x, const Point& y) {
    return p.d == 1 && x.v[0] * y.v[0] < 0.0;
}

}  // namespace

double log_h_boundary(const ModelParams& p, double r) {
    p.validate();
    check_radius(r);
    const double s = std::min(r, 1.0);
    return -0.5 * (p.d - 2 - p.beta) * std::log(s) -
           std::sqrt(p.kappa) / (p.beta * pow_pos(s, p.beta));
}

double h_boundary(const ModelParams& p, double r) {
    return std::exp(log_h_boundary(p, r));
}

double log_h_tilde(const ModelParams& p, double r) {
    p.validate();
    check_radius(r);
    const double nu = (p.d - 2) / (2.0 * p.beta);
    return -0.5 * (p.d - 2) * std::log(r) + log_bessel_k(nu, bessel_arg(p, r));
}

double h_tilde(const ModelParams& p, double r) {
    return std::exp(log_h_tilde(p, r));
}

double log_h_tilde_prime(const ModelParams& p, double r) {
    p.validate();
    check_radius(r);
    const double nu = (p.d - 2 - 2 * p.beta) / (2.0 * p.beta);
    return 0.5 * std::log(p.kappa) - (0.5 * p.d + p.beta) * std::log(r) +
           log_bessel_k(nu, bessel_arg(p, r));
}

double h_tilde_prime(const ModelParams& p, double r) {
    return std::exp(log_h_tilde_prime(p, r));
}

double h_tilde_log_deriv(const ModelParams& p, double r) {
    p.validate();
    check_radius(r);
    const double z = bessel_arg(p, r);
    const double nu = (p.d - 2) / (2.0 * p.beta);
    return std::sqrt(p.kappa) * pow_pos(r, -1.0 - p.beta) *
           std::exp(log_bessel_k(nu - 1.0, z) - log_bessel_k(nu, z));
}

double big_h(const ModelParams& p, double t, double r) {
    p.validate();
    check_time(t);
    check_radius(r);
    if (p.d >= 3) return h_boundary(p, r);
    if (p.d == 2) {
        const double num = r < 1.0 ? h_boundary(p, r) : log_shift(r);
        return std::min(1.0, num / log_shift(std::sqrt(t)));
    }
    const double num = r < 1.0 ? h_boundary(p, r) : r;
    return std::min(1.0, num / std::sqrt(t));
}

double psi_exterior(int d, double R, double t, double r) {
    if (!(R > 0.0)) throw std::invalid_argument("psi_exterior: R must be positive");
    check_time(t);
    if (r < R) throw std::invalid_argument("psi_exterior: requires r >= R");
    const double rt = std::sqrt(t);
    if (d >= 3) return std::min(1.0, std::min(r - R, R) / std::min(rt, R));
    if (d == 2)
        return std::min(1.0, std::min(r - R, R) * log_shift((r - R) / R) /
                                 (std::min(rt, R) * log_shift(rt / R)));
    return std::min(1.0, (r - R) / rt);
}

double eta0(const ModelParams& p) {
    p.validate();
    const double e = -4.0 - p.beta / (2.0 + p.beta);
    return std::pow(std::pow(2.0, e) * p.beta * std::sqrt(p.kappa), 1.0 / (2.0 + p.beta));
}

double eta1(const ModelParams& p) {
    const double v = std::pow(2.0, -2.0 / (2.0 + p.beta)) * eta0(p);
    // the introduction's closed form must agree
    const double e = -(12.0 + 7.0 * p.beta) / (2.0 + p.beta);
    const double alt =
        std::pow(std::pow(2.0, e) * p.beta * std::sqrt(p.kappa), 1.0 / (2.0 + p.beta));
    if (std::abs(v - alt) > 1e-12 * alt)
        throw std::runtime_error("eta1: closed-form consistency check failed");
    return v;
}

namespace {
double barrier_prefactor(BarrierKind kind, double a, double r) {
    const double ra = std::pow(r, a);
    return kind == BarrierKind::u1 ? 2.0 - ra : 1.0 + ra;
}
}  // namespace

double barrier_u(BarrierKind kind, const ModelParams& p, double beta_prime, double r) {
    p.validate();
    check_radius(r);
    if (!(beta_prime > 0.0) || !(beta_prime < p.beta))
        throw std::invalid_argument("barrier_u: beta' must lie in (0, beta)");
    if (r > 1.0) throw std::invalid_argument("barrier_u: requires r <= 1");
    const double a = 0.5 * (p.beta - beta_prime);
    return barrier_prefactor(kind, a, r) * h_tilde(p, r);
}

double barrier_ratio(BarrierKind kind, const ModelParams& p, double beta_prime,
                     double r, double R) {
    if (!(beta_prime > 0.0) || !(beta_prime < p.beta))
        throw std::invalid_argument("barrier_ratio: beta' must lie in (0, beta)");
    if (!(r > 0.0) || !(R > 0.0) || r > 1.0 || R > 1.0)
        throw std::invalid_argument("barrier_ratio: radii must lie in (0, 1]");
    const double a = 0.5 * (p.beta - beta_prime);
    return barrier_prefactor(kind, a, r) / barrier_prefactor(kind, a, R) *
           std::exp(log_h_tilde(p, r) - log_h_tilde(p, R));
}

double log_small_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                               double t, const Point& x, const Point& y) {
    p.validate();
    c.validate();
    if (!(t > 0.0) || t > 4.0)
        throw std::invalid_argument("small_time_envelope: requires t in (0,4]");
    check_point(x);
    check_point(y);
    if (opposite_sides_1d(p, x, y)) return -kInf;
    const double rx = x.norm(), ry = y.norm();
    const double tpow = std::pow(t, 1.0 / (2.0 + p.beta));
    const double log_ha = log_h_boundary(p, eta1(p) * tpow);
    const double clampx = std::min(0.0, log_h_boundary(p, rx) - log_ha);
    const double clampy = std::min(0.0, log_h_boundary(p, ry) - log_ha);
    const double rad = std::max(std::max(rx, ry), tpow);
    const double kill = c.c_kill * t / pow_pos(rad, 2.0 + 2.0 * p.beta);
    return clampx + clampy - kill + log_gaussian_q_r(p.d, c.c_gauss * t, dist(x, y));
}

EnvelopeValue small_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                                  double t, const Point& x, const Point& y) {
    return {std::exp(log_small_time_envelope(p, c, t, x, y)), c};
}

double log_large_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                               double t, const Point& x, const Point& y) {
    p.validate();
    c.validate();
    if (!(t >= 4.0)) throw std::invalid_argument("large_time_envelope: requires t >= 4");
    check_point(x);
    check_point(y);
    if (opposite_sides_1d(p, x, y)) return -kInf;
    return std::log(big_h(p, t, x.norm())) + std::log(big_h(p, t, y.norm())) +
           log_gaussian_q_r(p.d, c.c_gauss * t, dist(x, y));
}

EnvelopeValue large_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                                  double t, const Point& x, const Point& y) {
    return {std::exp(log_large_time_envelope(p, c, t, x, y)), c};
}

double green_g0(int d, const Point& x, const Point& y) {
    const double rho = dist(x, y);
    if (d >= 3) return std::pow(rho, 2.0 - d);
    const double m = std::min(x.norm(), y.norm());
    if (d == 2) return log_shift(m / std::min(rho, 1.0));
    return m;
}

double green_f0(int d, double beta, const Point& x, const Point& y) {
    const double rho = dist(x, y);
    if (d >= 3) return std::pow(rho, 2.0 - d);
    const double cap = std::pow(std::min(std::max(x.norm(), y.norm()), 1.0), 1.0 + beta);
    if (d == 2) return log_shift(cap / rho);
    return std::max(rho, cap);
}

double log_green_envelope(const ModelParams& p, const EnvelopeConstants& c,
                          const Point& x, const Point& y) {
    p.validate();
    c.validate();
    check_point(x);
    check_point(y);
    if (opposite_sides_1d(p, x, y)) return -kInf;
    const double rho = dist(x, y);
    if (rho == 0.0 && p.d >= 2) return kInf;  // on-diagonal divergence
    const double m = std::min(x.norm(), y.norm());
    const double M = std::max(x.norm(), y.norm());
    if (m >= 2.0) return std::log(green_g0(p.d, x, y));
    const double clamp =
        rho == 0.0 ? 0.0
                   : std::min(0.0, log_h_boundary(p, m) - log_h_boundary(p, c.eta2 * rho));
    return clamp + std::log(green_f0(p.d, p.beta, x, y)) -
           c.c_kill * rho / std::pow(M, 1.0 + p.beta);
}

EnvelopeValue green_envelope(const ModelParams& p, const EnvelopeConstants& c,
                             const Point& x, const Point& y) {
    return {std::exp(log_green_envelope(p, c, x, y)), c};
}

double sup_tradeoff_constant(double a, double b, double beta) {
    if (!(a > 0) || !(b > 0) || !(beta > 0))
        throw std::invalid_argument("sup_tradeoff_constant: a, b, beta must be positive");
    // first-order condition of phi(t) = -a/t + b t^{-beta/(2+beta)} at r = 1:
    //   a/t^2 = (beta/(2+beta)) b t^{-(2+2 beta)/(2+beta)}
    const double gam = (2.0 + 2.0 * beta) / (2.0 + beta);
    auto dphi = [&](double t) {
        return a / (t * t) - beta / (2.0 + beta) * b * std::pow(t, -gam);
    };
    double lo = 1e-12, hi = 1e12;
    if (!(dphi(lo) > 0.0) || !(dphi(hi) < 0.0))
        throw std::runtime_error("sup_tradeoff_constant: stationary point not bracketed");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (dphi(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace supkern
