#ifndef SUPKERN_VERIFY_HPP
#define SUPKERN_VERIFY_HPP

#include "supkern/fk_montecarlo.hpp"
#include "supkern/pde_radial.hpp"
#include "supkern/report.hpp"

namespace supkern {

enum class FitKind { small_time, large_time, green };
enum class NumericSource { pde, mc };

struct VerifyOptions {
    NumericSource source = NumericSource::pde;
    McConfig mc;
    int nodes_per_decade = 200;
    double pde_dt = 2e-4;
    double pde_r_min = 1e-3;
    double spread_cap = std::numeric_limits<double>::infinity();
    double green_t_max = 64.0;
};

/// Fits the envelope constants by minimizing the log-ratio spread of
/// numeric/envelope over the grid (coordinate search on a log scale) and
/// reports per-point ratios.  Kernel values come from the d=1 PDE solver or
/// from bridge Monte Carlo, following the source option.
RatioReport fit_constants(FitKind kind, const GridSpec& grid, const VerifyOptions& opt);

/// Least-squares slope of log u(t, r) against r^{-beta} over the given radii;
/// for potentials in K^loc(beta, kappa) this estimates -sqrt(kappa)/beta.
struct SlopeReport {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::pair<double, double>> points;  // (abscissa, ordinate)
};
SlopeReport decay_slope(const Potential& V, double t, const std::vector<double>& radii,
                        const VerifyOptions& opt);

/// Least-squares slope of log[u(t, r)/h(r)] against log r.  Strictly positive
/// for potentials satisfying the critical lower condition (the extra |x|^{a_2}
/// factor of the counterexample); ~0 for potentials in K^loc.
SlopeReport counterexample_exponent(const Potential& V, double t,
                                    const std::vector<double>& radii,
                                    const VerifyOptions& opt);

/// Mirrored counterexample probe: slope of log[w(r)/h~(r)] against log r for
/// the stationary exit probability w out of B(0,R); negative under the
/// critical upper condition, ~0 for canonical.
SlopeReport counterexample_exit_exponent(const Potential& V, double R,
                                         const std::vector<double>& radii,
                                         const VerifyOptions& opt);

/// Survival sandwich around h(r)/h(eta0 t^{1/(2+beta)}):
///   upper: PDE survival over the envelope (bounded spread);
///   lower: exit-capped probability at radius eta0 (t/4)^{1/(2+beta)} with cap
///          t/3 over the same envelope shape (bounded away from zero).
struct SandwichReport {
    RatioReport upper, lower;
};
SandwichReport survival_sandwich(const Potential& V,
                                 const std::vector<std::pair<double, double>>& t_r,
                                 const VerifyOptions& opt);

/// Membership precheck used by sandwich-style experiments.
bool in_kloc(const Potential& V);

}  // namespace supkern

#endif
