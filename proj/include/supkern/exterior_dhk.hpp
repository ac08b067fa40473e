#ifndef SUPKERN_EXTERIOR_DHK_HPP
#define SUPKERN_EXTERIOR_DHK_HPP

#include "supkern/mc.hpp"
#include "supkern/params.hpp"

namespace supkern {

/// Complement of the closed ball B(0,R) in dimension d.
struct ExteriorDomain {
    double R = 1.0;
    int d = 1;

    void validate() const {
        if (!(R > 0)) throw std::invalid_argument("ExteriorDomain: R must be positive");
        if (d < 1) throw std::invalid_argument("ExteriorDomain: d must be >= 1");
    }
};

/// d=1 Dirichlet heat kernel of the half line (R, inf) by the reflection
/// formula q(t,x,y) - q(t,x,2R-y); requires x, y > R.
double dhk_exact_1d(double R, double t, double x, double y);

/// log of the same; stays finite where the Gaussian factors underflow.
double dhk_exact_1d_log(double R, double t, double x, double y);

/// Brownian-bridge Monte Carlo estimate of q^{exterior}(t,x,y): the Gaussian
/// kernel times the probability that the pinned bridge never enters the closed
/// ball, with per-step tangent-plane crossing corrections
/// exp(-dist_i dist_{i+1} / dt).
McEstimate dhk_bridge_mc(const ExteriorDomain& dom, double t, const Point& x,
                         const Point& y, const McConfig& cfg);

}  // namespace supkern

#include "supkern/report.hpp"

namespace supkern {

/// Per-point ratio of the exterior kernel (exact in d=1, bridge MC otherwise)
/// to psi psi q(c t, x, y) with c fit to minimize the log-ratio spread.
RatioReport psi_ratio_report(const ExteriorDomain& dom, const GridSpec& grid,
                             const McConfig& cfg);

}  // namespace supkern

#endif
