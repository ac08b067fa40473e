#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "supkern/specfun.hpp"

using namespace supkern;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}
}  // namespace

TEST_CASE("bessel_k golden values") {
    // half-integer closed form
    const double k_half = std::sqrt(kPi / 2.0) * std::exp(-1.0);
    CHECK(rel_err(bessel_k(0.5, 1.0), k_half) < 1e-12);
    // quadrature oracle at assorted (nu, x)
    const double cases[][2] = {{0.0, 1.0},  {0.25, 5.0}, {1.0, 10.0}, {2.0, 0.3},
                               {0.75, 0.01}, {1.5, 2.0},  {0.1, 16.5}, {2.5, 40.0},
                               {0.0, 1e-5},  {0.49, 3.0}};
    for (auto& c : cases) {
        const double want = oracles::bessel_k_quadrature(c[0], c[1]);
        CHECK_MESSAGE(rel_err(bessel_k(c[0], c[1]), want) < 1e-10,
                      "nu=", c[0], " x=", c[1]);
    }
    // frozen spot values from the quadrature oracle
    CHECK(rel_err(bessel_k(0.0, 1.0), 0.42102443824070834) < 1e-10);
    CHECK(rel_err(bessel_k(0.5, 1.0), 0.46106850444789456) < 1e-10);
}

TEST_CASE("bessel_k symmetry in the order") {
    for (double nu : {0.3, 0.5, 1.0, 1.7, 2.0})
        for (double x : {0.05, 0.8, 3.0, 25.0})
            CHECK(rel_err(bessel_k(-nu, x), bessel_k(nu, x)) < 1e-12);
}

TEST_CASE("bessel_k large-argument asymptotics") {
    // sqrt(x) e^x K_nu(x) -> sqrt(pi/2).  The exact remainder is
    // ~ (4 nu^2 - 1)/(8x) * sqrt(pi/2), so the 1e-3 window needs x >~ 2.4e3
    // for |nu| = 2; sample x >= 1e4.
    for (double nu : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
        for (double x : {1e4, 1e5, 1e6, 1e7}) {
            const double v = std::sqrt(x) * bessel_k_scaled(nu, x);
            CHECK(std::abs(v - std::sqrt(kPi / 2.0)) < 1e-3);
        }
    // at moderate x the deviation from the limit matches the first-order term
    for (double nu : {0.0, 1.0, 2.0})
        for (double x : {100.0, 300.0}) {
            const double v = std::sqrt(x) * bessel_k_scaled(nu, x);
            const double lead = std::sqrt(kPi / 2.0) * (4.0 * nu * nu - 1.0) / (8.0 * x);
            CHECK(std::abs(v - std::sqrt(kPi / 2.0) - lead) < 5e-2 * std::abs(lead) + 1e-9);
        }
}

TEST_CASE("bessel_k recurrence with finite-difference derivative") {
    // K_nu'(x) + (nu/x) K_nu(x) = -K_{nu-1}(x)
    for (double nu : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
        for (double x : {0.3, 1.0, 4.0, 12.0, 50.0}) {
            const double h = 1e-5 * x;
            const double dk = (bessel_k(nu, x + h) - bessel_k(nu, x - h)) / (2.0 * h);
            const double lhs = dk + (nu / x) * bessel_k(nu, x);
            const double rhs = -bessel_k(nu - 1.0, x);
            CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(rhs));
        }
}

TEST_CASE("log_bessel_k tracks underflowed magnitudes") {
    // Against the scaled value at extreme arguments where K underflows.
    for (double nu : {0.0, 0.5, 2.0}) {
        for (double x : {800.0, 1e4, 1e8}) {
            const double lg = log_bessel_k(nu, x);
            const double expect = std::log(bessel_k_scaled(nu, x)) - x;
            CHECK(lg == doctest::Approx(expect).epsilon(1e-14));
            CHECK(std::isfinite(lg));
        }
        CHECK(bessel_k(nu, 800.0) == 0.0);  // graceful underflow
    }
    // consistency with the plain value where both representations work
    for (double x : {0.5, 5.0, 100.0})
        CHECK(rel_err(std::exp(log_bessel_k(0.3, x)), bessel_k(0.3, x)) < 1e-12);
}

TEST_CASE("bessel_k domain errors") {
    CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("gaussian_q values and properties") {
    Point x = axis_point(1, 0.0), y = axis_point(1, 0.0);
    CHECK(rel_err(gaussian_q(1, 1.0, x, y), std::pow(4.0 * kPi, -0.5)) < 1e-12);
    Point x3 = axis_point(3, 0.0), y3 = axis_point(3, 1.0);
    CHECK(rel_err(gaussian_q(3, 1.0, x3, y3),
                  std::pow(4.0 * kPi, -1.5) * std::exp(-0.25)) < 1e-12);
    // q(t,x,x) >= q(t,x,y), symmetry
    CHECK(gaussian_q(3, 0.7, x3, x3) >= gaussian_q(3, 0.7, x3, y3));
    CHECK(gaussian_q(3, 0.7, x3, y3) == gaussian_q(3, 0.7, y3, x3));
    CHECK_THROWS_AS(gaussian_q(1, 0.0, x, y), std::invalid_argument);
}

TEST_CASE("gaussian_q integrates to one and obeys the semigroup law (d=1)") {
    // int q(s,x,z) q(t-s,z,y) dz = q(t,x,y), quadrature tolerance 1e-8
    const double s = 0.3, t = 1.0, x = 0.2, y = -0.7;
    auto f = [&](double z) {
        return gaussian_q_r(1, s, std::abs(x - z)) * gaussian_q_r(1, t - s, std::abs(z - y));
    };
    const double got = oracles::integrate(f, -30.0, 30.0, 1e-12);
    CHECK(std::abs(got - gaussian_q_r(1, t, std::abs(x - y))) < 1e-8);

    auto g = [&](double z) { return gaussian_q_r(1, t, std::abs(x - z)); };
    CHECK(std::abs(oracles::integrate(g, -40.0, 40.0, 1e-12) - 1.0) < 1e-8);
}

TEST_CASE("log_shift") {
    CHECK(log_shift(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rel_err(log_shift(0.0), std::log(std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(rel_err(log_shift(10.0), std::log(std::exp(1.0) - 1.0 + 10.0)) < 1e-12);
    CHECK(log_shift(0.3) < log_shift(0.31));
    CHECK_THROWS_AS(log_shift(-0.1), std::invalid_argument);
}
