#ifndef SUPKERN_POTENTIALS_HPP
#define SUPKERN_POTENTIALS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supkern/envelopes.hpp"
#include "supkern/params.hpp"

namespace supkern {

enum class PotentialForm { canonical, perturbed, critical, custom };

enum class ClassTag { Kloc_ge, Kloc_le, Kloc, K, critical_upper, critical_lower };

/// Radial killing potential.  The constructor families all carry the canonical
/// kappa r^{-2-2beta} tail on r > 1; the inner piece on (0,1] distinguishes them.
class Potential {
public:
    static Potential canonical(const ModelParams& p);
    /// V(r) = (kappa + sign C r^theta)_+ r^{-2-2beta} on (0,1]; requires theta > beta.
    static Potential perturbed(const ModelParams& p, double C, double theta, int sign);
    /// V(r) = kappa r^{-2-2beta} + sign C r^{-2-beta} on (0,1];
    /// sign=-1 requires C <= kappa (nonnegativity).
    static Potential critical(const ModelParams& p, double C, int sign);
    /// Caller-supplied radial form; must declare whether int_{B(0,1)} V diverges.
    static Potential custom(const ModelParams& p, std::function<double(double)> f,
                            bool origin_divergent);
    static Potential zero(const ModelParams& p);  // free motion; for oracles only

    double operator()(double r) const;

    PotentialForm form() const { return form_; }
    const ModelParams& params() const { return params_; }
    double strength_c() const { return C_; }
    double theta() const { return theta_; }
    int sign() const { return sign_; }
    bool is_zero() const { return zero_; }

    /// True when int_{B(0,1)} V = inf, so paths die almost surely at the origin;
    /// the Monte Carlo hard cutoff applies only to such potentials.
    bool origin_divergent() const {
        return !zero_ && (form_ != PotentialForm::custom || custom_origin_divergent_);
    }

    /// Tags stamped by the constructors (critical_upper / critical_lower).
    bool has_tag(ClassTag tag) const;

    /// Validates nonnegativity on a grid and the origin divergence of the
    /// radial mass integral; throws on violation.
    void validate() const;

    /// Plain-text key-value block (form, beta, kappa, C, theta, sign, C3, gamma).
    std::map<std::string, std::string> to_kv() const;
    static Potential from_kv(const ModelParams& p, const std::map<std::string, std::string>& kv);

private:
    Potential() = default;
    PotentialForm form_ = PotentialForm::canonical;
    ModelParams params_;
    double C_ = 0.0, theta_ = 0.0;
    int sign_ = +1;
    double outer_c3_ = 0.0, outer_gamma_ = 0.0;  // canonical tail by default
    bool zero_ = false;
    std::function<double(double)> custom_;
    bool custom_origin_divergent_ = false;
    std::vector<ClassTag> tags_;
};

/// Result of a class-membership check on a grid.
struct ClassifyReport {
    bool member = false;
    double witness_c = 0.0;       // admissible constant when member
    double witness_beta_p = 0.0;  // admissible beta' (or gamma for the tail test)
    double worst_r = 0.0;         // most violating grid point otherwise
    double worst_excess = 0.0;    // required constant at the worst point
};

/// Grid test of the defining inequality of `tag` with (C, beta') found by
/// linear search; a finite grid plus a refinement trend stands in for the
/// r -> 0 limit.  Grid points must cover (0,1] (and (1,inf) for K).
ClassifyReport classify(const Potential& V, ClassTag tag,
                        const std::vector<double>& grid);

/// Default log-spaced classification grid, 1000 points over [1e-4, 1]
/// plus a tail extension for the K test.
std::vector<double> default_class_grid();

/// Radial function with two derivatives for generator application.
struct RadialC2 {
    std::function<double(double)> f;
    std::function<double(double)> df;   // empty -> central finite differences
    std::function<double(double)> d2f;  // empty -> central finite differences
};

/// L^V f (r) = f''(r) + (d-1)/r f'(r) - V(r) f(r).
double apply_generator(const Potential& V, const RadialC2& f, double r);

/// Analytic h~-based inputs: derivatives come from the Bessel recurrence and
/// the ODE identity  h~'' = kappa r^{-2-2beta} h~ - (d-1)/r h~'.
RadialC2 make_h_tilde_c2(const ModelParams& p);
RadialC2 make_power_h_tilde_c2(const ModelParams& p, double a);  // r^a h~(r)
RadialC2 make_barrier_c2(BarrierKind kind, const ModelParams& p, double beta_prime);

/// Scaled generator sign s(r) = L^V(w r^a-combination h~)/h~ for barrier scans;
/// finite at radii where h~ itself underflows.
double scaled_generator_u(BarrierKind kind, const Potential& V, double beta_prime, double r);
double scaled_generator_power(const Potential& V, double a, double r);

/// Largest R <= 1 with the required generator sign on [0.02 R, R], i.e. the
/// radius below which the barrier argument works; 0 when none exists.
double barrier_radius(BarrierKind kind, const Potential& V, double beta_prime);

/// Exponent search for the counterexample barriers: smallest |a| in a ladder
/// making L^V(r^{sign a} h~) have the required sign on (0, r_hi]; returns 0 on failure.
double counterexample_exponent_barrier(const Potential& V, int which, double r_hi);

}  // namespace supkern

#endif
