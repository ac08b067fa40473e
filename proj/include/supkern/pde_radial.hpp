#ifndef SUPKERN_PDE_RADIAL_HPP
#define SUPKERN_PDE_RADIAL_HPP

#include <vector>

#include "supkern/potentials.hpp"

namespace supkern {

/// Node layout and stepping controls for the radial Crank-Nicolson solver.
/// Nodes are log-spaced on [r_min, 1] and uniform beyond; dt may grow
/// proportionally to elapsed time for long-horizon solves.
struct RadialGrid {
    std::vector<double> r;
    double dt = 1e-4;
    double dt_growth = 0.0;  // dt_n = max(dt, dt_growth * t_elapsed)

    void validate() const;
};

/// nodes_per_decade applies below r = 1; spacing is frozen at its r = 1 value
/// on [1, r_max].
RadialGrid make_radial_grid(double r_min, double r_max, int nodes_per_decade, double dt,
                            double dt_growth = 0.0);

/// Moves the node nearest each anchor onto the anchor, so kernel evaluation
/// points are met exactly.
RadialGrid with_anchors(RadialGrid g, const std::vector<double>& anchors);

enum class OuterBc { reflecting, absorbing, dirichlet_one };

/// V evaluated at the interior nodes, clamped at V_cap = 1e12 (nodes at the cap
/// act as absorbing).
std::vector<double> cap_potential(const Potential& V, const RadialGrid& g);
constexpr double kPotentialCap = 1e12;

/// Survival probability u(t, r) = P_r(zeta > t): backward equation
/// du/dt = u'' + (d-1)/r u' - V u with u(0,.) = 1, absorbing at r_min,
/// `outer` (default reflecting) at r_max.  Requires r_max >= 8 sqrt(t) + 1
/// for the reflecting default.  Returns node values, in [0,1].
std::vector<double> solve_survival(const Potential& V, const ModelParams& p,
                                   const RadialGrid& g, double t,
                                   OuterBc outer = OuterBc::reflecting);

/// Same solve reporting several horizons t1 < t2 < ... in one sweep.
std::vector<std::vector<double>> solve_survival_snapshots(
    const Potential& V, const ModelParams& p, const RadialGrid& g,
    const std::vector<double>& times, OuterBc outer = OuterBc::reflecting);

/// d=1 heat kernel p(t, x, y) on the half line: forward equation from a
/// one-cell hat of unit mass at y, absorbing at both ends; x, y snap to grid
/// nodes.  Symmetric in (x, y) up to discretization error.
double solve_kernel_1d(const Potential& V, double t, double x, double y,
                       const RadialGrid& g);

/// Full kernel column p(t_k, ., y) for reuse across evaluation points.
std::vector<std::vector<double>> solve_kernel_1d_snapshots(
    const Potential& V, const std::vector<double>& times, double y, const RadialGrid& g);

/// w(t, r) = P_r(tau_{B(0,R)} < zeta ^ t): parabolic problem with w = 1 on the
/// outer boundary (taken as the last grid node) and absorbing inner boundary.
std::vector<double> solve_exit_before_cap(const Potential& V, const ModelParams& p,
                                          const RadialGrid& g, double t);

/// Stationary exit probability w(r) = P_r(tau_{B(0,R)} < zeta): L^V w = 0,
/// w(r_min) = 0, w(R) = 1 with R the last grid node.
std::vector<double> solve_exit_probability(const Potential& V, const ModelParams& p,
                                           const RadialGrid& g);

/// Linear interpolation helper over the grid nodes.
double grid_interp(const RadialGrid& g, const std::vector<double>& u, double r);

}  // namespace supkern

#endif
