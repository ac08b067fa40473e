#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "supkern/fk_montecarlo.hpp"
#include "supkern/pde_radial.hpp"
#include "supkern/specfun.hpp"

using namespace supkern;

namespace {
const ModelParams kP311{3, 1.0, 1.0};
const ModelParams kP111{1, 1.0, 1.0};
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

McConfig quick_cfg(std::int64_t paths, double floor_log = -80.0) {
    McConfig c;
    c.paths = paths;
    c.dt = 0.005;
    c.substep_theta = 0.2;
    c.weight_floor = floor_log;
    c.seed = 20240815;
    c.threads = 2;
    return c;
}
}  // namespace

TEST_CASE("integrate_potential_along_path") {
    auto mk = [](std::initializer_list<std::pair<double, double>> pts) {
        std::vector<std::pair<double, Point>> path;
        for (auto [t, r] : pts) path.emplace_back(t, axis_point(3, r));
        return path;
    };
    CHECK(integrate_potential_along_path(Potential::zero(kP311), mk({{0, 1}, {1, 2}})) == 0.0);
    auto lam = Potential::custom(kP311, [](double) { return 0.7; }, false);
    CHECK(integrate_potential_along_path(lam, mk({{0, 1}, {0.5, 2}, {2, 1}})) ==
          doctest::Approx(0.7 * 2.0).epsilon(1e-14));
    auto V = Potential::canonical(kP311);
    CHECK(integrate_potential_along_path(V, mk({{0, 1}, {0.1, 1}})) ==
          doctest::Approx(0.1).epsilon(1e-14));
    CHECK(std::isinf(integrate_potential_along_path(V, mk({{0, 1}, {1, 1e-5}}))));
    CHECK_THROWS_AS(integrate_potential_along_path(V, mk({{1, 1}, {0, 2}})),
                    std::invalid_argument);
}

TEST_CASE("survival: exact degenerate cases") {
    const Point x = axis_point(3, 0.6);
    auto e0 = survival_probability(Potential::zero(kP311), x, 0.5, quick_cfg(2000));
    CHECK(e0.mean == 1.0);
    CHECK(e0.std_error == 0.0);
    auto lam = Potential::custom(kP311, [](double) { return 1.3; }, false);
    auto el = survival_probability(lam, x, 0.5, quick_cfg(2000));
    CHECK(rel_err(el.mean, std::exp(-1.3 * 0.5)) < 1e-12);
    CHECK(el.std_error < 1e-15);
}

TEST_CASE("survival cross-oracle vs the radial PDE (d=3)") {
    auto V = Potential::canonical(kP311);
    const double t = 0.2, r = 0.6;
    auto g = make_radial_grid(1e-3, 8.0, 250, 1e-4);
    const double pde = grid_interp(g, solve_survival(V, kP311, g, t), r);
    auto mc = survival_probability(V, axis_point(3, r), t, quick_cfg(40000));
    CHECK(std::abs(mc.mean - pde) < std::max(3 * mc.std_error, 0.02 * pde));
}

TEST_CASE("heat_kernel: exact degenerate cases") {
    const Point x = axis_point(3, 0.7), y = axis_point(3, 1.2);
    auto e0 = heat_kernel(Potential::zero(kP311), 0.8, x, y, quick_cfg(500));
    CHECK(rel_err(e0.mean, gaussian_q(3, 0.8, x, y)) < 1e-12);
    // d=1 opposite signs: exactly zero
    auto ez = heat_kernel(Potential::canonical(kP111), 0.5, axis_point(1, 0.5),
                          axis_point(1, -0.5), quick_cfg(500));
    CHECK(ez.mean == 0.0);
    CHECK(ez.zero_weight_frac == 1.0);
}

TEST_CASE("heat_kernel cross-oracle vs the d=1 PDE") {
    auto V = Potential::canonical(kP111);
    const double t = 0.5;
    auto g = with_anchors(make_radial_grid(1e-3, 8.0, 250, 1e-4), {1.0, 2.0});
    const double pde = solve_kernel_1d(V, t, 1.0, 2.0, g);
    auto mc = heat_kernel(V, t, axis_point(1, 1.0), axis_point(1, 2.0), quick_cfg(60000));
    CHECK(std::abs(mc.mean - pde) < std::max(3 * mc.std_error, 0.03 * pde));
}

TEST_CASE("heat_kernel symmetry and Gaussian domination") {
    auto V = Potential::canonical(kP311);
    const Point x = axis_point(3, 0.5), y = axis_point(3, 1.0);
    auto cfg1 = quick_cfg(20000);
    auto cfg2 = quick_cfg(20000);
    cfg2.seed = 555;
    auto a = heat_kernel(V, 0.3, x, y, cfg1);
    auto b = heat_kernel(V, 0.3, y, x, cfg2);
    const double se = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.mean - b.mean) < 3 * se);
    CHECK(a.mean <= gaussian_q(3, 0.3, x, y) * (1 + 1e-12));
}

TEST_CASE("seed determinism across thread counts") {
    auto V = Potential::canonical(kP311);
    auto c1 = quick_cfg(8192);
    c1.threads = 1;
    auto c8 = quick_cfg(8192);
    c8.threads = 8;
    auto a = survival_probability(V, axis_point(3, 0.5), 0.1, c1);
    auto b = survival_probability(V, axis_point(3, 0.5), 0.1, c8);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.zero_weight_frac == b.zero_weight_frac);
    // and across repeated runs
    auto c = survival_probability(V, axis_point(3, 0.5), 0.1, c8);
    CHECK(b.mean == c.mean);
}

TEST_CASE("killing monotonicity at matched seeds") {
    // pointwise larger V, same stepping rule -> pathwise smaller weights
    auto V1 = Potential::canonical(kP311);
    auto V2 = Potential::critical(kP311, 5.0, +1);
    auto cfg = quick_cfg(20000);
    auto a = survival_probability(V1, axis_point(3, 0.5), 0.2, cfg);
    auto b = survival_probability(V2, axis_point(3, 0.5), 0.2, cfg);
    CHECK(a.mean > b.mean);
    auto g1 = green_mc(V1, axis_point(3, 0.5), axis_point(3, 1.0), quick_cfg(400), 16.0);
    auto g0 = green_mc(Potential::zero(kP311), axis_point(3, 0.5), axis_point(3, 1.0),
                       quick_cfg(400), 16.0);
    CHECK(g1.mean < g0.mean);
}

TEST_CASE("exit_before_death basics") {
    // V=0, t_cap=inf: Brownian motion exits every ball
    auto e0 = exit_before_death(Potential::zero(kP311), axis_point(3, 0.25), 0.5,
                                std::numeric_limits<double>::infinity(), quick_cfg(2000));
    CHECK(e0.mean == 1.0);
    // |x| -> R^-: immediate exit
    auto V = Potential::canonical(kP311);
    auto e1 = exit_before_death(V, axis_point(3, 0.495), 0.5,
                                std::numeric_limits<double>::infinity(), quick_cfg(4000));
    CHECK(e1.mean > 0.9);
    // barrier sandwich (u2 ratio - 3se <= est <= u1 ratio + 3se), R=0.5, |x|=0.25
    auto es = exit_before_death(V, axis_point(3, 0.25), 0.5,
                                std::numeric_limits<double>::infinity(), quick_cfg(40000));
    const double lo = barrier_ratio(BarrierKind::u2, kP311, 0.5, 0.25, 0.5);
    const double hi = barrier_ratio(BarrierKind::u1, kP311, 0.5, 0.25, 0.5);
    CHECK(es.mean >= lo - 3 * es.std_error);
    CHECK(es.mean <= hi + 3 * es.std_error);
}

TEST_CASE("green_mc free case reproduces the Newtonian potential") {
    // d=3, V=0, |x-y|=1: G = 1/(4 pi)
    auto g = green_mc_detail(Potential::zero(kP311), axis_point(3, 1.0), axis_point(3, 2.0),
                             quick_cfg(256), 256.0);
    CHECK(rel_err(g.estimate.mean, 1.0 / (4 * 3.14159265358979323846)) < 0.05);
    CHECK(g.tail > 0.0);
    CHECK_FALSE(g.truncated_tail);
    // canonical V: finite, smaller, with a reported ratio to the envelope elsewhere
    auto gc = green_mc(Potential::canonical(kP311), axis_point(3, 0.5),
                       axis_point(3, 0.75), quick_cfg(256), 64.0);
    CHECK(std::isfinite(gc.mean));
    CHECK(gc.mean > 0.0);
}

TEST_CASE("free_green_tail matches quadrature") {
    // int_T^inf q dt for d=3 via erf, d=5 via the series
    for (int d : {3, 5}) {
        const double rho = 0.8, T = 2.0;
        double sum = 0.0;
        double t = T;
        const double f = 1.0005;
        while (t < 1e7) {
            const double tn = t * f;
            sum += 0.5 * (gaussian_q_r(d, t, rho) + gaussian_q_r(d, tn, rho)) * (tn - t);
            t = tn;
        }
        CHECK(rel_err(free_green_tail(d, T, rho), sum) < 1e-3);
    }
}
