#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixlayer/equilibrium.hpp"
#include "oracles.hpp"

using namespace mixlayer;
using Catch::Approx;

namespace {

const PhysicalConstants kConsts;

Forcing forcing(double vx, double vy, double q) {
    return Forcing{vx, vy, q, kConsts};
}

ClosureModel model(ClosureKind k) { return ClosureModel(k, kPP81); }

/// Window wide enough to contain every root: |R*| <= sup|k| / |C|.
RangeSpec window_for(const ClosureModel& m, double c) {
    const double kbar =
        2.0 * std::max({std::abs(k_curve(m, 0.0)),
                        m.coeffs().alpha1 * m.coeffs().alpha1 /
                            m.coeffs().alpha2,
                        m.coeffs().beta1});
    const double w = std::max(10.0, 1.5 * kbar / std::abs(c));
    return RangeSpec{-w, w, 20000};
}

}  // namespace

TEST_CASE("fixed-point constant") {
    // worked example, cross-checked by independent arithmetic
    const Forcing f = forcing(0.1, 0.0, -1e-5);
    const double c = fixed_point_constant(f);
    const double independent = 1.2 * 1.2 * 0.01 / (9.81 * 1e-5 * 1025.0);
    REQUIRE(c == Approx(independent).epsilon(1e-15));
    REQUIRE(c == Approx(0.14320877153725667).epsilon(1e-14));

    // sign follows -sign(Q)
    REQUIRE(fixed_point_constant(forcing(0.3, 0.1, -2e-4)) > 0.0);
    REQUIRE(fixed_point_constant(forcing(0.3, 0.1, 2e-4)) < 0.0);

    // scaling (Vx, Vy) by 2 scales C by exactly 4
    const double c1 = fixed_point_constant(forcing(0.07, -0.02, -1e-5));
    const double c2 = fixed_point_constant(forcing(0.14, -0.04, -1e-5));
    REQUIRE(c2 == 4.0 * c1);

    REQUIRE_THROWS_AS(fixed_point_constant(forcing(0.1, 0.0, 0.0)),
                      ZeroFluxError);
    REQUIRE_THROWS_AS(fixed_point_constant(forcing(0.0, 0.0, -1e-5)),
                      ZeroWindError);
}

TEST_CASE("k curve") {
    const auto r224 = model(ClosureKind::R224);
    REQUIRE(k_curve(r224, 0.0) ==
            Approx(1.01e-2 * 1.01e-2 / 1.011e-2).epsilon(1e-14));
    REQUIRE(k_curve(r224, 1e9) == Approx(1e-3).epsilon(1e-6));  // alpha1^2/alpha2
    REQUIRE(k_curve(model(ClosureKind::R213), -1.0) < 0.0);
    REQUIRE_THROWS_AS(k_curve(r224, -0.2), PoleError);
}

TEST_CASE("constructed root is recovered to 1e-8") {
    const auto m = model(ClosureKind::R224);
    const double c = k_curve(m, 1.0);
    const RootScan scan = solve_fixed_points({m, c});
    REQUIRE(scan.roots.size() == 1);
    REQUIRE(scan.roots[0].r == Approx(1.0).margin(1e-8));
    REQUIRE(scan.roots[0].valid);
}

TEST_CASE("fixed-point residual bound holds at every root") {
    oracle::Uniform rnd(555);
    for (ClosureKind kind : kAllKinds) {
        const auto m = model(kind);
        for (int i = 0; i < 12; ++i) {
            const double c =
                std::copysign(std::pow(10.0, rnd(-4, 1)), i % 2 ? 1.0 : -1.0);
            const RootScan scan = solve_fixed_points({m, c}, window_for(m, c));
            for (const Root& r : scan.roots) {
                REQUIRE(r.residual <= 1e-10);
            }
        }
    }
}

TEST_CASE("R-2-2-4 root is unique across signed C magnitudes") {
    const auto m = model(ClosureKind::R224);
    oracle::Uniform rnd(2222);
    for (int i = 0; i < 40; ++i) {
        const double c =
            std::copysign(std::pow(10.0, rnd(-6, 2)), i % 2 ? 1.0 : -1.0);
        const RootScan scan = solve_fixed_points({m, c}, window_for(m, c));
        INFO("C = " << c);
        REQUIRE(scan.roots.size() == 1);
        REQUIRE(scan.roots[0].valid);
    }
}

TEST_CASE("C = -1 yields several roots for the non-unique models") {
    // brute-force discovered witness: all three models intersect the line
    // three times at C = -1 with PP81 (calibrated beta2 for R-2-3)
    for (ClosureKind kind :
         {ClosureKind::R22, ClosureKind::R213, ClosureKind::R23}) {
        const auto m = model(kind);
        const RootScan scan = solve_fixed_points({m, -1.0});
        INFO(kind_name(kind));
        REQUIRE(scan.roots.size() >= 2);

        // dense-scan oracle over the same window agrees root for root
        const auto expect = oracle::scan_roots(m, -1.0, -10.0, 10.0, 400000);
        REQUIRE(scan.roots.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            REQUIRE(scan.roots[i].r == Approx(expect[i]).margin(1e-6));
        }
    }
}

TEST_CASE("frozen witness roots at C = -1") {
    const RootScan r22 = solve_fixed_points({model(ClosureKind::R22), -1.0});
    REQUIRE(r22.roots.size() == 3);
    CHECK(r22.roots[0].r == Approx(-0.24077515).margin(1e-6));
    CHECK(r22.roots[1].r == Approx(-0.14797459).margin(1e-6));
    CHECK(r22.roots[2].r == Approx(-0.01144106).margin(1e-6));

    const RootScan r213 = solve_fixed_points({model(ClosureKind::R213), -1.0});
    REQUIRE(r213.roots.size() == 3);
    CHECK(r213.roots[0].r == Approx(-3.13237167).margin(1e-6));
    CHECK(r213.roots[1].r == Approx(-0.18944241).margin(1e-6));
    CHECK(r213.roots[2].r == Approx(-0.01064806).margin(1e-6));

    const RootScan r23 = solve_fixed_points({model(ClosureKind::R23), -1.0});
    REQUIRE(r23.roots.size() == 3);
    CHECK(r23.roots[0].r == Approx(-2.25047127).margin(1e-6));
    CHECK(r23.roots[1].r == Approx(-0.09898346).margin(1e-6));
    CHECK(r23.roots[2].r == Approx(-0.00103665).margin(1e-6));
}

TEST_CASE("valid roots for C > 0 sit at positive R") {
    // a valid root needs k = f1^2/f2 > 0, and C > 0 makes the line negative
    // on R < 0
    oracle::Uniform rnd(31);
    for (ClosureKind kind : kAllKinds) {
        const auto m = model(kind);
        for (int i = 0; i < 8; ++i) {
            const double c = std::pow(10.0, rnd(-3, 1));
            const RootScan scan = solve_fixed_points({m, c}, window_for(m, c));
            for (const Root& r : scan.roots) {
                if (r.valid) REQUIRE(r.r > 0.0);
            }
        }
    }
}

TEST_CASE("root set is invariant under swapping the wind components") {
    const auto m = model(ClosureKind::R22);
    const double ca = fixed_point_constant(forcing(0.07, -0.13, 2e-5));
    const double cb = fixed_point_constant(forcing(-0.13, 0.07, 2e-5));
    REQUIRE(ca == cb);  // depends on Vx^2 + Vy^2 only
    const RootScan sa = solve_fixed_points({m, ca});
    const RootScan sb = solve_fixed_points({m, cb});
    REQUIRE(sa.roots.size() == sb.roots.size());
    for (std::size_t i = 0; i < sa.roots.size(); ++i) {
        REQUIRE(sa.roots[i].r == sb.roots[i].r);  // bitwise
    }
}

TEST_CASE("window truncation reports no roots for tiny C") {
    // with |C| = 1e-6 the single intersection sits near |R| ~ 1e3, far
    // outside the default [-10, 10] window
    const RootScan scan = solve_fixed_points({model(ClosureKind::R224), 1e-6});
    REQUIRE(scan.roots.empty());
}

TEST_CASE("tangency shows up as a grazing report or a merged pair") {
    // locate the fold C where the inner root pair of R-2-2 merges, by
    // bisection on the oracle root count in the (-0.19, -0.01) window
    const auto m = model(ClosureKind::R22);
    auto pair_count = [&](double c) {
        return oracle::scan_roots(m, c, -0.19, -0.01, 100000).size();
    };
    double c_two = -0.3529707;  // witness side: the pair exists
    double c_zero = -0.30;      // pair gone
    REQUIRE(pair_count(c_two) == 2);
    REQUIRE(pair_count(c_zero) == 0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (c_two + c_zero);
        (pair_count(mid) == 2 ? c_two : c_zero) = mid;
    }

    const RangeSpec fine{-0.19, -0.01, 2000000};
    const RootScan at_fold = solve_fixed_points({m, c_two}, fine);
    // just past the fold (clearly off it, beyond evaluation round-off):
    // no crossing and no graze
    const RootScan past_fold = solve_fixed_points({m, c_zero + 1e-6}, fine);
    // at the fold the pair is either merged within dedup distance or flagged
    // as grazing
    REQUIRE(at_fold.roots.size() + at_fold.grazing.size() >= 1);
    REQUIRE(past_fold.roots.empty());
    REQUIRE(past_fold.grazing.empty());
}

TEST_CASE("equilibrium profiles") {
    const auto m = model(ClosureKind::R224);
    const Forcing f = forcing(0.0325, 0.0, -1e-5);
    const double c = fixed_point_constant(f);
    REQUIRE(c == Approx(0.015126426493622735).epsilon(1e-13));
    const RootScan scan = solve_fixed_points({m, c});
    REQUIRE(scan.roots.size() == 1);
    const double rstar = scan.roots[0].r;
    REQUIRE(rstar == Approx(0.6213554360226292).margin(1e-9));

    const BoundaryValues b{0.03, -0.01, 1025.5, 50.0};
    const Equilibrium eq = build_equilibrium(m, f, rstar, b);

    // boundary values recovered exactly at z = -h
    REQUIRE(eq.u_at(-b.h) == b.ub);
    REQUIRE(eq.v_at(-b.h) == b.vb);
    REQUIRE(eq.rho_at(-b.h) == b.rhob);

    // surface value: u(0) = ub + Vx rho_a h / (rho0 nu1)
    REQUIRE(eq.u_at(0.0) ==
            Approx(b.ub + f.vx * kConsts.rho_a * b.h /
                              (kConsts.rho0 * eq.nu1e)).epsilon(1e-14));

    // zero meridional forcing: flat v profile
    REQUIRE(eq.beta_e == 0.0);
    REQUIRE(eq.v_at(-25.0) == b.vb);
    REQUIRE(eq.v_at(0.0) == b.vb);

    // self-consistency of the fixed point
    const double r_chk =
        richardson({eq.theta_e, eq.beta_e, eq.psi_e}, kConsts);
    REQUIRE(r_chk == Approx(rstar).epsilon(1e-10));

    // flux recovery (round-off only)
    REQUIRE(eq.nu1e * eq.theta_e ==
            Approx(f.vx * kConsts.rho_a / kConsts.rho0).epsilon(1e-15));
    REQUIRE(eq.nu2e * eq.psi_e == Approx(f.q).epsilon(1e-15));
}

TEST_CASE("self-consistency holds for every valid root of every model") {
    oracle::Uniform rnd(808);
    const BoundaryValues b;
    for (ClosureKind kind : kAllKinds) {
        const auto m = model(kind);
        for (int i = 0; i < 10; ++i) {
            const double q = std::copysign(std::pow(10.0, rnd(-6, -4)),
                                           i % 2 ? 1.0 : -1.0);
            const Forcing f = forcing(0.02 + 0.1 * rnd(0, 1), 0.05 * rnd(0, 1),
                                      q);
            const double c = fixed_point_constant(f);
            const RootScan scan = solve_fixed_points({m, c}, window_for(m, c));
            for (const Root& root : scan.roots) {
                if (!root.valid) continue;
                const Equilibrium eq = build_equilibrium(m, f, root.r, b);
                const double r_chk = richardson(
                    {eq.theta_e, eq.beta_e, eq.psi_e}, kConsts);
                REQUIRE(r_chk == Approx(root.r).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("building an equilibrium inside the invalid band throws") {
    const auto m = model(ClosureKind::R213);
    REQUIRE_THROWS_AS(
        build_equilibrium(m, forcing(0.1, 0.0, 1e-5), -1.0, BoundaryValues{}),
        InvalidEquilibriumError);
}

TEST_CASE("prescribed-R equilibrium is exactly self-consistent") {
    const BoundaryValues b;
    for (ClosureKind kind : kAllKinds) {
        const auto m = model(kind);
        for (double re : {-4.0, -0.05, 0.0, 0.3, 2.0, 9.5}) {
            const Equilibrium eq =
                equilibrium_for_richardson(m, re, 0.0325, 0.01, kConsts, b);
            const double r_chk =
                richardson({eq.theta_e, eq.beta_e, eq.psi_e}, kConsts);
            REQUIRE(r_chk == Approx(re).margin(1e-13));
            // consistent forcing closes the loop: C = k(re)/re at re != 0
            if (re != 0.0 && eq.nu2e > 0.0) {
                const Forcing f = forcing(0.0325, 0.01, eq.q());
                REQUIRE(fixed_point_constant(f) ==
                        Approx(k_curve(m, re) / re).epsilon(1e-12));
            }
        }
    }
}
