#include "supkern/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace supkern {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRtHalfPi = 1.25331413731550025;  // sqrt(pi/2)
constexpr double kTol = 1e-15;

// Temme's coefficients for g1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu) at small mu,
// as a series in mu^2 (SLATEC DBSKNU).
constexpr double kCc[8] = {
    0.577215664901533,   -0.0420026350340952, -0.0421977345555443,
    0.007218943246663,   -2.152416741149e-4,  -2.01348547807e-5,
    1.133027232e-6,      6.116095e-9};

// exp(x)*K_mu(x) and exp(x)*K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2.
void temme_series(double mu, double x, double& k0s, double& k1s) {
    const double mu2 = std::abs(mu) >= kTol ? mu * mu : 0.0;
    const double t1 = 1.0 / std::tgamma(1.0 - mu);
    const double t2 = 1.0 / std::tgamma(1.0 + mu);
    double g1;
    if (std::abs(mu) > 0.1) {
        g1 = (t1 - t2) / (2.0 * mu);
    } else {
        double s = kCc[0], ak = 1.0;
        for (int k = 1; k < 8; ++k) {
            ak *= mu2;
            const double tm = kCc[k] * ak;
            s += tm;
            if (std::abs(tm) < kTol) break;
        }
        g1 = -s;
    }
    const double g2 = (t1 + t2) * 0.5;
    const double lrx = std::log(2.0 / x);
    const double fmu = mu * lrx;
    double fc = 1.0, smu = 1.0;
    if (mu != 0.0) {
        fc = mu * kPi / std::sin(mu * kPi);
        if (fmu != 0.0) smu = std::sinh(fmu) / fmu;
    }
    double f = fc * (g1 * std::cosh(fmu) + g2 * lrx * smu);
    const double efmu = std::exp(fmu);
    double p = 0.5 * efmu / t2;
    double q = 0.5 / (efmu * t1);
    double ak = 1.0, bk = 1.0, ck = 1.0;
    double s1 = f, s2 = p;
    if (x >= kTol) {
        const double cx = 0.25 * x * x;
        double rel;
        do {
            f = (ak * f + p + q) / (bk - mu2);
            p /= ak - mu;
            q /= ak + mu;
            ck *= cx / ak;
            const double u1 = ck * f;
            s1 += u1;
            const double u2 = ck * (p - ak * f);
            s2 += u2;
            bk += 2.0 * ak + 1.0;
            ak += 1.0;
            rel = std::abs(u1) / (std::abs(s1) + 1.0) + std::abs(u2) / (std::abs(s2) + 1.0);
        } while (rel > kTol);
    }
    const double ex = std::exp(x);
    k0s = s1 * ex;
    k1s = s2 * (2.0 / x) * ex;
}

// Miller backward-recurrence algorithm, 2 < x <= 17, |mu| < 1/2.
void miller(double mu, double x, double& k0s, double& k1s) {
    const double mu2 = std::abs(mu) >= kTol ? mu * mu : 0.0;
    const double coef = kRtHalfPi / std::sqrt(x);
    const double etest = std::cos(kPi * mu) / (kPi * x * kTol);
    constexpr int kMax = 320;
    double a[kMax], b[kMax];
    double fk = 0.0, fks = 1.0, fhs = 0.25, ck = x + x + 2.0;
    double p1 = 0.0, p2 = 1.0;
    int k = 0;
    do {
        fk += 1.0;
        const double ak = (fhs - mu2) / (fks + fk);
        const double bk = ck / (fk + 1.0);
        const double pt = p2;
        p2 = bk * p2 - ak * p1;
        p1 = pt;
        a[k] = ak;
        b[k] = bk;
        ck += 2.0;
        fks += fk + fk + 1.0;
        fhs += fk + fk;
        ++k;
        if (k >= kMax) throw std::runtime_error("bessel_k: Miller recurrence failed to converge");
    } while (etest > fk * p1);
    double s = 1.0;
    p1 = 0.0;
    p2 = 1.0;
    for (int i = k - 1; i >= 0; --i) {
        const double pt = p2;
        p2 = (b[i] * p2 - p1) / a[i];
        p1 = pt;
        s += p2;
    }
    k0s = coef * (p2 / s);
    k1s = k0s * (x + mu + 0.5 - p1 / p2) / x;
}

// Large-argument asymptotic expansion, x > 17, |mu| <= 1/2.
void asymptotic(double mu, double x, double& k0s, double& k1s) {
    const double coef = kRtHalfPi / std::sqrt(x);
    const double ex = 8.0 * x;
    double fmu = 4.0 * mu * mu;
    double s2 = 0.0;
    for (int ord = 0; ord < 2; ++ord) {
        const double s1 = s2;
        double s = 1.0, ck = 1.0, sqk = 1.0, dk = ex, ak = 0.0;
        for (int j = 0; j < 40; ++j) {
            ck = ck * (fmu - sqk) / dk;
            s += ck;
            dk += ex;
            ak += 8.0;
            sqk += ak;
            if (std::abs(ck) < kTol) break;
        }
        s2 = s * coef;
        fmu += 8.0 * mu + 4.0;  // shift order mu -> mu+1
        (void)s1;
        if (ord == 0) k0s = s2;
    }
    k1s = s2;
}

}  // namespace

double bessel_k_scaled(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("bessel_k: argument must be positive and finite");
    if (!std::isfinite(nu)) throw std::invalid_argument("bessel_k: order must be finite");
    nu = std::abs(nu);  // K_{-nu} = K_nu
    const int inu = static_cast<int>(nu + 0.5);
    const double mu = nu - inu;  // in [-1/2, 1/2)

    double k0s, k1s;
    if (std::abs(mu) == 0.5) {
        // half-odd-integer order: K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        k0s = k1s = kRtHalfPi / std::sqrt(x);
    } else if (x <= 2.0) {
        temme_series(mu, x, k0s, k1s);
    } else if (x <= 17.0) {
        miller(mu, x, k0s, k1s);
    } else {
        asymptotic(mu, x, k0s, k1s);
    }
    if (inu == 0) return k0s;
    // forward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, stable upward
    double ck = (mu + mu + 2.0) / x;
    for (int i = 1; i < inu; ++i) {
        const double t = k1s;
        k1s = ck * k1s + k0s;
        k0s = t;
        ck += 2.0 / x;
    }
    return k1s;
}

double bessel_k(double nu, double x) {
    const double s = bessel_k_scaled(nu, x);
    if (x > 700.0) return std::exp(std::log(s) - x);  // graceful underflow to 0
    return s * std::exp(-x);
}

double log_bessel_k(double nu, double x) {
    return std::log(bessel_k_scaled(nu, x)) - x;
}

double gaussian_q_r(int d, double t, double dist) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_q: t must be positive");
    return std::exp(log_gaussian_q_r(d, t, dist));
}

double log_gaussian_q_r(int d, double t, double dist) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_q: t must be positive");
    return -0.5 * d * std::log(4.0 * kPi * t) - dist * dist / (4.0 * t);
}

double gaussian_q(int d, double t, const Point& x, const Point& y) {
    return gaussian_q_r(d, t, dist(x, y));
}

double log_shift(double r) {
    if (r < 0.0) throw std::invalid_argument("log_shift: argument must be nonnegative");
    return std::log(std::exp(1.0) - 1.0 + r);
}

}  // namespace supkern
