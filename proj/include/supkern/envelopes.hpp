#ifndef SUPKERN_ENVELOPES_HPP
#define SUPKERN_ENVELOPES_HPP

#include "supkern/params.hpp"
#include "supkern/specfun.hpp"

namespace supkern {

/// Slots for the existential constants of the two-sided estimates.  The
/// estimates assert existence only; concrete values are fit by the
/// verification harness and threaded through every envelope evaluation.
struct EnvelopeConstants {
    double c_gauss = 1.0;  // Gaussian time dilation (c_3/c_6 slot)
    double c_kill = 1.0;   // killing exponent (c_2/c_5 slot)
    double eta2 = 1.0;     // Green scale eta_2, fit parameter

    void validate() const {
        if (!(c_gauss > 0) || !(c_kill > 0) || !(eta2 > 0))
            throw std::invalid_argument("EnvelopeConstants: all slots must be positive");
    }
};

struct EnvelopeValue {
    double value = 0.0;
    EnvelopeConstants constants_used;
};

// --- boundary functions -----------------------------------------------------

/// h(r) = (r ^ 1)^{-(d-2-beta)/2} exp(-sqrt(kappa)/(beta (r ^ 1)^beta)), constant on [1, inf).
double h_boundary(const ModelParams& p, double r);
double log_h_boundary(const ModelParams& p, double r);

/// h~(r) = r^{-(d-2)/2} K_{(d-2)/(2 beta)}(sqrt(kappa)/(beta r^beta)), increasing.
double h_tilde(const ModelParams& p, double r);
double log_h_tilde(const ModelParams& p, double r);

/// h~'(r) = sqrt(kappa) r^{-d/2-beta} K_{(d-2-2 beta)/(2 beta)}(sqrt(kappa)/(beta r^beta)) > 0.
double h_tilde_prime(const ModelParams& p, double r);
double log_h_tilde_prime(const ModelParams& p, double r);

/// h~'(r)/h~(r), computed as a Bessel log-ratio; usable far below the underflow radius.
double h_tilde_log_deriv(const ModelParams& p, double r);

/// Large-time profile H_{d,beta,kappa}(t,r); dimension-dependent branches.
double big_h(const ModelParams& p, double t, double r);

/// Exterior-ball profile psi_{d,R}(t,r) for r >= R; 0 at r = R, values in [0,1].
double psi_exterior(int d, double R, double t, double r);

/// eta_0 = (2^{-4-beta/(2+beta)} beta sqrt(kappa))^{1/(2+beta)}.
double eta0(const ModelParams& p);

/// eta_1 = 2^{-2/(2+beta)} eta_0; asserted against the equivalent closed form
/// (2^{-(12+7 beta)/(2+beta)} beta sqrt(kappa))^{1/(2+beta)} to 1e-12 relative.
double eta1(const ModelParams& p);

// --- barriers ----------------------------------------------------------------

enum class BarrierKind { u1, u2 };

/// u1(r) = (2 - r^{(beta-beta')/2}) h~(r),  u2(r) = (1 + r^{(beta-beta')/2}) h~(r), r <= 1.
double barrier_u(BarrierKind kind, const ModelParams& p, double beta_prime, double r);

/// Ratio u(k, r) / u(k, R) evaluated through log h~; safe at radii where h~ underflows.
double barrier_ratio(BarrierKind kind, const ModelParams& p, double beta_prime,
                     double r, double R);

// --- the kernel envelopes -----------------------------------------------------

/// Small-time two-sided shape for t in (0,4] (log scale; -inf means exact zero).
double log_small_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                               double t, const Point& x, const Point& y);
EnvelopeValue small_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                                  double t, const Point& x, const Point& y);

/// Large-time shape H H q for t >= 4.
double log_large_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                               double t, const Point& x, const Point& y);
EnvelopeValue large_time_envelope(const ModelParams& p, const EnvelopeConstants& c,
                                  double t, const Point& x, const Point& y);

/// Green-function shape; +inf at coinciding points for d >= 2.
double log_green_envelope(const ModelParams& p, const EnvelopeConstants& c,
                          const Point& x, const Point& y);
EnvelopeValue green_envelope(const ModelParams& p, const EnvelopeConstants& c,
                             const Point& x, const Point& y);

/// g0 / f0 building blocks of the Green estimates.
double green_g0(int d, const Point& x, const Point& y);
double green_f0(int d, double beta, const Point& x, const Point& y);

/// The constant c = c(a/b, beta) with
///   sup_{t>0} (-a r^2/t + b/t^{beta/(2+beta)}) = -a/(c r^beta) + b/(c^{beta/(2+beta)} r^beta),
/// obtained by solving the first-order condition of the 1-D optimization numerically.
double sup_tradeoff_constant(double a, double b, double beta);

}  // namespace supkern

#endif
