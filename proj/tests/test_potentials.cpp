#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "supkern/potentials.hpp"

using namespace supkern;

namespace {
const ModelParams kP311{3, 1.0, 1.0};
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("canonical potential") {
    auto V = Potential::canonical(kP311);
    CHECK(rel_err(V(0.5), 16.0) < 1e-12);
    CHECK(V(1.0) == doctest::Approx(1.0));
    V.validate();
    const auto grid = default_class_grid();
    for (auto tag : {ClassTag::Kloc_ge, ClassTag::Kloc_le, ClassTag::Kloc, ClassTag::K}) {
        CHECK(V.has_tag(tag));
        const auto rep = classify(V, tag, grid);
        CHECK(rep.member);
    }
    // canonical satisfies the ge condition already with C1 = 0
    CHECK(classify(V, ClassTag::Kloc_ge, grid).witness_c == 0.0);
}

TEST_CASE("perturbed potential") {
    auto V = Potential::perturbed(kP311, 1.0, 2.0, +1);
    CHECK(rel_err(V(1.0), 2.0) < 1e-12);  // (kappa + 1) at r=1
    CHECK(classify(V, ClassTag::Kloc, default_class_grid()).member);
    V.validate();

    auto Vm = Potential::perturbed(kP311, 1.0, 2.0, -1);
    CHECK(Vm(1.0) == doctest::Approx(0.0));
    for (double r : {0.1, 0.4, 0.9, 1.0}) CHECK(Vm(r) >= 0.0);
    CHECK_THROWS_AS(Potential::perturbed(kP311, 1.0, 0.5, +1), std::invalid_argument);
}

TEST_CASE("critical potential") {
    auto Vp = Potential::critical(kP311, 0.5, +1);
    CHECK(rel_err(Vp(0.5), 20.0) < 1e-12);
    CHECK(Vp.has_tag(ClassTag::critical_lower));
    const auto grid = default_class_grid();
    CHECK(classify(Vp, ClassTag::critical_lower, grid).member);
    CHECK_FALSE(classify(Vp, ClassTag::Kloc_le, grid).member);
    CHECK(classify(Vp, ClassTag::Kloc_ge, grid).member);

    auto Vm = Potential::critical(kP311, 0.5, -1);
    CHECK(rel_err(Vm(0.5), 12.0) < 1e-12);
    CHECK(Vm.has_tag(ClassTag::critical_upper));
    CHECK(classify(Vm, ClassTag::critical_upper, grid).member);
    CHECK_FALSE(classify(Vm, ClassTag::Kloc_ge, grid).member);
    CHECK(classify(Vm, ClassTag::Kloc_le, grid).member);
    CHECK_THROWS_AS(Potential::critical(kP311, 2.0, -1), std::invalid_argument);
    Vp.validate();
    Vm.validate();
}

TEST_CASE("custom potential validation") {
    auto ok = Potential::custom(kP311, [](double r) { return 2.0 / (r * r * r * r); }, true);
    ok.validate();
    auto bad = Potential::custom(kP311, [](double) { return 0.5; }, true);
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);  // integrable near 0
    auto neg = Potential::custom(kP311, [](double r) { return r - 0.5; }, true);
    CHECK_THROWS_AS(neg.validate(), std::runtime_error);
}

TEST_CASE("apply_generator basics") {
    // V=0, f = r^2: Laplacian of |x|^2 is 2d
    for (int d : {1, 2, 3}) {
        auto V = Potential::zero({d, 1.0, 1.0});
        RadialC2 f{[](double r) { return r * r; }, nullptr, nullptr};
        CHECK(rel_err(apply_generator(V, f, 0.7), 2.0 * d) < 1e-5);
    }
    // canonical V annihilates h~
    for (const ModelParams p : {kP311, ModelParams{2, 0.5, 2.0}, ModelParams{1, 2.0, 1.0}}) {
        auto V = Potential::canonical(p);
        auto ht = make_h_tilde_c2(p);
        for (double r : {0.15, 0.4, 0.8}) {
            const double scale = p.kappa * std::pow(r, -2 - 2 * p.beta) * ht.f(r);
            CHECK(std::abs(apply_generator(V, ht, r)) < 1e-5 * scale);
        }
        // finite differences agree with the analytic route
        RadialC2 fd{ht.f, nullptr, nullptr};
        for (double r : {0.3, 0.6}) {
            const double scale = p.kappa * std::pow(r, -2 - 2 * p.beta) * ht.f(r);
            CHECK(std::abs(apply_generator(V, fd, r) - apply_generator(V, ht, r)) <
                  1e-4 * scale);
        }
    }
}

TEST_CASE("barrier generator signs and radii") {
    // L^V u1 <= 0 and L^V u2 >= 0 below the empirical radii, canonical V
    auto V = Potential::canonical(kP311);
    const double bp = 0.5;
    const double R1 = barrier_radius(BarrierKind::u1, V, bp);
    const double R2 = barrier_radius(BarrierKind::u2, V, bp);
    CHECK(R1 >= 0.02);
    CHECK(R2 >= 0.02);
    // scaled values match the full generator applied to the barrier
    auto u1 = make_barrier_c2(BarrierKind::u1, kP311, bp);
    for (double r : {0.1, 0.5, 0.9}) {
        const double full = apply_generator(V, u1, r);
        const double scaled = scaled_generator_u(BarrierKind::u1, V, bp, r) * h_tilde(kP311, r);
        CHECK(std::abs(full - scaled) < 1e-6 * (std::abs(full) + std::abs(scaled) + 1e-300));
    }
    // the full 27-combo sweep is exercised by the acceptance suite; spot-check here
    for (const ModelParams p : {ModelParams{1, 0.5, 0.5}, ModelParams{2, 2.0, 4.0}}) {
        auto Vc = Potential::canonical(p);
        CHECK(barrier_radius(BarrierKind::u1, Vc, p.beta / 2) >= 0.02);
        CHECK(barrier_radius(BarrierKind::u2, Vc, p.beta / 2) >= 0.02);
    }
}

TEST_CASE("counterexample barrier exponents") {
    // critical(-1): some a1 > 0 makes L^V(r^{-a1} h~) >= 0 near the origin
    auto Vm = Potential::critical(kP311, 0.5, -1);
    const double a1 = counterexample_exponent_barrier(Vm, 1, 0.5);
    CHECK(a1 > 0.0);
    // critical(+1): some a2 > 0 makes L^V(r^{+a2} h~) <= 0
    auto Vp = Potential::critical(kP311, 5.0, +1);
    const double a2 = counterexample_exponent_barrier(Vp, 2, 0.5);
    CHECK(a2 > 0.0);
    MESSAGE("empirical a1=", a1, " a2=", a2);
    // canonical admits no such exponent on either side
    auto V0 = Potential::canonical(kP311);
    CHECK(counterexample_exponent_barrier(V0, 1, 0.5) == 0.0);
}

TEST_CASE("serialization round trip") {
    auto V = Potential::critical({3, 0.5, 2.0}, 0.25, -1);
    const auto kv = V.to_kv();
    CHECK(kv.at("form") == "critical");
    auto W = Potential::from_kv({3, 1.0, 1.0}, kv);
    for (double r : {0.2, 0.7, 1.5}) CHECK(rel_err(W(r), V(r)) < 1e-9);
    CHECK_THROWS_AS(Potential::from_kv(kP311, {{"form", "nope"}}), std::invalid_argument);
}
