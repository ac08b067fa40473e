#ifndef SUPKERN_FK_MONTECARLO_HPP
#define SUPKERN_FK_MONTECARLO_HPP

#include <utility>
#include <vector>

#include "supkern/mc.hpp"
#include "supkern/potentials.hpp"

namespace supkern {

/// Trapezoid approximation of int V(W_s) ds over a time-stamped polyline.
/// Returns +inf when any sample lies inside the hard cutoff radius.
double integrate_potential_along_path(const Potential& V,
                                      const std::vector<std::pair<double, Point>>& path,
                                      double r_min = 1e-4);

/// P_x(zeta > t) = E_x[ exp(-int_0^t V(W_s) ds) ] over free Brownian paths.
McEstimate survival_probability(const Potential& V, const Point& x, double t,
                                const McConfig& cfg);

/// p(t,x,y) = q(t,x,y) E[ exp(-int V along the Brownian bridge x -> y) ].
/// In d=1 with xy < 0 the estimate is exactly zero.
McEstimate heat_kernel(const Potential& V, double t, const Point& x, const Point& y,
                       const McConfig& cfg);

/// E_x[ exp(-int_0^tau V) ; tau <= t_cap ] with tau the first exit of B(0,R).
McEstimate exit_before_death(const Potential& V, const Point& x, double R, double t_cap,
                             const McConfig& cfg);

struct GreenEstimate {
    McEstimate estimate;
    double quadrature = 0.0;   // time integral over (0, t_max]
    double tail = 0.0;         // analytic free tail beyond t_max (d >= 3)
    bool truncated_tail = false;  // d <= 2: tail dropped, warning
};

/// G(x,y) ~ int_0^{t_max} p(t,x,y) dt by log-spaced quadrature over bridge
/// estimates (cfg.paths per node) plus, for d >= 3, the free-kernel tail as a
/// bracketing correction.
GreenEstimate green_mc_detail(const Potential& V, const Point& x, const Point& y,
                              const McConfig& cfg, double t_max);
McEstimate green_mc(const Potential& V, const Point& x, const Point& y,
                    const McConfig& cfg, double t_max);

/// int_{t}^{inf} q(s,x,y) ds for d >= 3 (Newtonian tail).
double free_green_tail(int d, double t, double dist);

// estimator stream tags (RNG separation)
constexpr std::uint64_t kStreamSurvival = 1;
constexpr std::uint64_t kStreamKernel = 2;
constexpr std::uint64_t kStreamExit = 3;
constexpr std::uint64_t kStreamDhk = 4;
constexpr std::uint64_t kStreamGreenBase = 1000;

}  // namespace supkern

#endif
