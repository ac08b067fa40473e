#ifndef SUPKERN_PARAMS_HPP
#define SUPKERN_PARAMS_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace supkern {

/// Model triple (d, beta, kappa) consumed by every formula in the toolkit.
/// The killing potential behaves like kappa * |x|^{-(2+2*beta)} near the origin.
struct ModelParams {
    int d = 3;           // spatial dimension, >= 1
    double beta = 1.0;   // singularity exponent, > 0
    double kappa = 1.0;  // killing strength, > 0

    void validate() const {
        if (d < 1) throw std::invalid_argument("ModelParams: d must be >= 1");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("ModelParams: beta must be positive");
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw std::invalid_argument("ModelParams: kappa must be positive");
    }
};

// Points live in at most four dimensions here; everything radial is a plain double.
constexpr int kMaxDim = 4;

struct Point {
    std::array<double, kMaxDim> v{};
    int d = 1;

    double norm2() const {
        double s = 0;
        for (int i = 0; i < d; ++i) s += v[i] * v[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

inline Point axis_point(int d, double r) {
    Point p;
    p.d = d;
    p.v[0] = r;
    return p;
}

inline double dist(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < a.d; ++i) {
        const double t = a.v[i] - b.v[i];
        s += t * t;
    }
    return std::sqrt(s);
}

// x^p for the killing exponents 2+2*beta etc.  The common betas make p a small
// integer, where repeated multiplication beats std::pow on the MC hot path.
inline double pow_pos(double x, double p) {
    const int ip = static_cast<int>(p);
    if (p == static_cast<double>(ip) && ip >= 0 && ip <= 16) {
        double acc = 1.0, base = x;
        int e = ip;
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    return std::pow(x, p);
}

}  // namespace supkern

#endif
