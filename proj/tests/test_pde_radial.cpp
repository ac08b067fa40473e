#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "supkern/pde_radial.hpp"
#include "supkern/specfun.hpp"

using namespace supkern;

namespace {
const ModelParams kP311{3, 1.0, 1.0};
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("grid construction") {
    auto g = make_radial_grid(1e-3, 8.0, 200, 1e-4);
    g.validate();
    CHECK(g.r.front() == doctest::Approx(1e-3));
    CHECK(g.r.back() >= 8.0);
    // log-spaced below 1, uniform above
    const auto it = std::lower_bound(g.r.begin(), g.r.end(), 1.0);
    const size_t i1 = it - g.r.begin();
    CHECK(rel_err(g.r[10] / g.r[9], g.r[100] / g.r[99]) < 1e-9);
    CHECK(rel_err(g.r[i1 + 2] - g.r[i1 + 1], g.r[i1 + 10] - g.r[i1 + 9]) < 1e-9);
    CHECK_THROWS_AS(make_radial_grid(0.0, 1.0, 100, 1e-4), std::invalid_argument);
}

TEST_CASE("cap_potential") {
    auto g = make_radial_grid(1e-4, 2.0, 100, 1e-4);
    auto V = Potential::canonical(kP311);
    const auto tab = cap_potential(V, g);
    CHECK(tab.front() == kPotentialCap);  // 1e16 clamped
    for (size_t i = 0; i < g.r.size(); ++i) CHECK(tab[i] <= V(g.r[i]) + 1e-12);
    const auto z = cap_potential(Potential::zero(kP311), g);
    for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("free survival is one away from the absorbing cutoff (d=3)") {
    auto g = make_radial_grid(1e-6, 8.0, 120, 2e-4);
    const auto u = solve_survival(Potential::zero(kP311), kP311, g, 0.5);
    CHECK(rel_err(grid_interp(g, u, 1.0), 1.0) < 1e-3);
    CHECK(rel_err(grid_interp(g, u, 3.0), 1.0) < 1e-3);
}

TEST_CASE("survival self-convergence, canonical V") {
    auto V = Potential::canonical(kP311);
    auto g1 = make_radial_grid(1e-3, 8.0, 150, 4e-4);
    auto g2 = make_radial_grid(1e-3, 8.0, 300, 2e-4);
    const double a = grid_interp(g1, solve_survival(V, kP311, g1, 0.2), 0.6);
    const double b = grid_interp(g2, solve_survival(V, kP311, g2, 0.2), 0.6);
    CHECK(rel_err(a, b) < 0.005);
}

TEST_CASE("exit-capped survival obeys the exponential bound") {
    // absorbing also at R: u <= exp(-3 kappa t / (4 R^{2+2 beta})) pointwise
    auto V = Potential::canonical(kP311);
    const double R = 0.5, t = 0.2;
    auto g = make_radial_grid(1e-3, R, 250, 5e-5);
    const auto u = solve_survival(V, kP311, g, t, OuterBc::absorbing);
    const double bound = std::exp(-3.0 * t / (4.0 * std::pow(R, 4.0)));
    for (double v : u) CHECK(v <= bound * (1 + 1e-6));
}

TEST_CASE("d=1 free kernel matches the reflection oracle") {
    // oracle: absorbing origin, q(t,x,y) - q(t,x,-y)
    auto V = Potential::zero({1, 1.0, 1.0});
    auto g = make_radial_grid(1e-5, 8.0, 220, 1e-4);
    const double got = solve_kernel_1d(V, 0.5, 1.0, 2.0, g);
    const double want = gaussian_q_r(1, 0.5, 1.0) - gaussian_q_r(1, 0.5, 3.0);
    CHECK(rel_err(got, want) < 2e-3);
}

TEST_CASE("d=1 canonical kernel: symmetry and Gaussian domination") {
    auto V = Potential::canonical({1, 1.0, 1.0});
    auto g = make_radial_grid(1e-3, 8.0, 200, 2e-4);
    const double pxy = solve_kernel_1d(V, 0.5, 1.0, 2.0, g);
    const double pyx = solve_kernel_1d(V, 0.5, 2.0, 1.0, g);
    CHECK(std::abs(pxy - pyx) < 1e-3 * pxy);
    CHECK(pxy < gaussian_q_r(1, 0.5, 1.0));
    for (double t : {0.2, 1.0}) {
        const double p = solve_kernel_1d(V, t, 0.5, 0.5, g);
        CHECK(p < gaussian_q_r(1, t, 0.0));
        CHECK(p > 0.0);
    }
}

TEST_CASE("r_min insensitivity for the canonical potential") {
    auto V = Potential::canonical(kP311);
    const std::vector<double> radii{0.1, 0.3, 0.6, 1.0};
    auto g1 = with_anchors(make_radial_grid(1e-3, 8.0, 300, 1e-4), radii);
    auto g2 = with_anchors(make_radial_grid(5e-4, 8.0, 300, 1e-4), radii);
    const auto u1 = solve_survival(V, kP311, g1, 0.2);
    const auto u2 = solve_survival(V, kP311, g2, 0.2);
    for (double r : radii)
        CHECK(rel_err(grid_interp(g1, u1, r), grid_interp(g2, u2, r)) < 1e-3);
}

TEST_CASE("stationary exit probability reproduces the d=3 harmonic profile") {
    // V=0: w(r) = (1/r_min - 1/r) / (1/r_min - 1/R)
    auto V = Potential::zero(kP311);
    auto g = make_radial_grid(0.01, 1.0, 400, 1e-4);
    const auto w = solve_exit_probability(V, kP311, g);
    for (double r : {0.05, 0.2, 0.5, 0.9}) {
        const double want = (1.0 / 0.01 - 1.0 / r) / (1.0 / 0.01 - 1.0);
        CHECK(rel_err(grid_interp(g, w, r), want) < 1e-3);
    }
}

TEST_CASE("exit before cap grows with the horizon") {
    auto V = Potential::canonical(kP311);
    auto g = make_radial_grid(1e-3, 0.4, 250, 5e-5);
    const auto w1 = solve_exit_before_cap(V, kP311, g, 0.02);
    const auto w2 = solve_exit_before_cap(V, kP311, g, 0.08);
    const auto ws = solve_exit_probability(V, kP311, g);
    for (double r : {0.1, 0.2, 0.3}) {
        const double a = grid_interp(g, w1, r), b = grid_interp(g, w2, r);
        CHECK(a <= b * (1 + 1e-9));
        CHECK(b <= grid_interp(g, ws, r) * (1 + 1e-6));
        CHECK(a >= 0.0);
    }
}

TEST_CASE("Chapman-Kolmogorov at desk scale (d=1, canonical)") {
    // int p(t/2, x, z) p(t/2, z, y) dz == p(t, x, y) within 2%
    auto V = Potential::canonical({1, 1.0, 1.0});
    const double t = 0.5, x = 1.0, y = 2.0;
    auto g = with_anchors(make_radial_grid(1e-3, 8.0, 250, 1e-4), {x, y});
    const double whole = solve_kernel_1d(V, t, x, y, g);
    const auto from_x = solve_kernel_1d_snapshots(V, {t / 2}, x, g).front();
    const auto from_y = solve_kernel_1d_snapshots(V, {t / 2}, y, g).front();
    double conv = 0.0;
    for (size_t i = 0; i + 1 < g.r.size(); ++i)
        conv += 0.5 * (from_x[i] * from_y[i] + from_x[i + 1] * from_y[i + 1]) *
                (g.r[i + 1] - g.r[i]);
    CHECK(std::abs(conv - whole) < 0.02 * whole);
}
