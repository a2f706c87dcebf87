#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixlayer/closures.hpp"
#include "oracles.hpp"

using namespace mixlayer;
using Catch::Approx;

namespace {

ClosureModel make(ClosureKind k, Coefficients c = kPP81) {
    return ClosureModel(k, c);
}

}  // namespace

TEST_CASE("model and preset names resolve exactly") {
    REQUIRE(kind_by_name("R-2-1-3") == ClosureKind::R213);
    REQUIRE(kind_by_name("R-2-3") == ClosureKind::R23);
    REQUIRE(kind_by_name("R-2-2-4") == ClosureKind::R224);
    REQUIRE(kind_by_name("R-2-2") == ClosureKind::R22);
    REQUIRE_FALSE(kind_by_name("R-2-2-4 ").has_value());
    REQUIRE(kind_name(ClosureKind::R213) == "R-2-1-3");

    REQUIRE(preset_by_name("PP81").has_value());
    REQUIRE(preset_by_name("OPA").has_value());
    REQUIRE_FALSE(preset_by_name("pp81").has_value());
    REQUIRE(preset_by_name("PP81")->alpha1 == 1e-4);
    REQUIRE(preset_by_name("PP81")->beta1 == 1e-2);
    REQUIRE(preset_by_name("PP81")->alpha2 == 1e-5);
    REQUIRE(preset_by_name("OPA")->alpha1 == 1e-6);
    REQUIRE(preset_by_name("OPA")->alpha2 == 1e-7);
}

TEST_CASE("beta2 defaults: R-2-2 mirrors beta1, R-2-3 puts the f2 zero at "
          "-2.25") {
    REQUIRE(make(ClosureKind::R22).coeffs().beta2 == 1e-2);
    REQUIRE(make(ClosureKind::R23).coeffs().beta2 ==
            Approx(1e-5 * 9938.375).epsilon(1e-15));
    // explicit beta2 wins
    REQUIRE(ClosureModel(ClosureKind::R22, {1e-4, 1e-2, 1e-5, 3e-2})
                .coeffs()
                .beta2 == 3e-2);
    // models that never use beta2 leave it alone
    REQUIRE(make(ClosureKind::R224).coeffs().beta2 == 0.0);
    REQUIRE(make(ClosureKind::R213).coeffs().beta2 == 0.0);
}

TEST_CASE("f1 values") {
    const auto r224 = make(ClosureKind::R224);
    REQUIRE(r224.f1(0.0) == Approx(1.01e-2).epsilon(1e-14));
    REQUIRE(r224.f1(1e12) == Approx(1e-4).epsilon(1e-12));  // floor asymptote

    const auto r23 = make(ClosureKind::R23);
    REQUIRE(r23.f1(0.1) == Approx(2.6e-3).epsilon(1e-14));
    REQUIRE(r23.rate() == 10.0);
    REQUIRE(r23.pole() == Approx(-0.1));
    REQUIRE(r224.pole() == Approx(-0.2));
}

TEST_CASE("f2 values per model") {
    const auto r213 = make(ClosureKind::R213);
    REQUIRE(r213.f2(0.0) == Approx(1.011e-2).epsilon(1e-14));
    // inside the negative-diffusivity band
    REQUIRE(r213.f2(-1.0) == Approx(1e-5 - 2.5e-5 - 1.5625e-4).epsilon(1e-14));
    REQUIRE(r213.f2(-1.0) < 0.0);

    const auto r224 = make(ClosureKind::R224);
    REQUIRE(r224.f2(-1.0) ==
            Approx(1e-5 + 1e-4 / 16 + 1e-2 / 256).epsilon(1e-14));
    REQUIRE(r224.f2(-1.0) > 0.0);

    const auto r22 = make(ClosureKind::R22);
    REQUIRE(r22.f2(0.0) == Approx(1e-5 + 1e-2).epsilon(1e-14));

    const auto r23 = make(ClosureKind::R23);
    REQUIRE(r23.f2(0.0) == Approx(1e-5 + 1e-5 * 9938.375).epsilon(1e-14));
}

TEST_CASE("pole evaluation throws") {
    const auto r224 = make(ClosureKind::R224);
    REQUIRE_THROWS_AS(r224.f1(-0.2), PoleError);
    REQUIRE_THROWS_AS(r224.f2(-0.2), PoleError);
    REQUIRE_THROWS_AS(r224.df1(-0.2), PoleError);
    REQUIRE_THROWS_AS(r224.df2(-0.2), PoleError);
    REQUIRE_THROWS_AS(make(ClosureKind::R23).f1(-0.1), PoleError);
    REQUIRE_NOTHROW(r224.f1(-0.2 + 1e-6));
}

TEST_CASE("analytic derivatives") {
    const auto r224 = make(ClosureKind::R224);
    REQUIRE(r224.df1(0.0) == Approx(-0.1).epsilon(1e-14));
    REQUIRE(std::abs(r224.df1(1e9)) < 1e-20);  // flat at large R
    REQUIRE(std::abs(r224.df2(1e9)) < 1e-20);

    // spot check against the finite-difference oracle at moderate step
    const auto r213 = make(ClosureKind::R213);
    const double fd = oracle::central_diff(
        [&](double r) { return r213.f2(r); }, 0.2, 1e-6);
    REQUIRE(r213.df2(0.2) == Approx(fd).epsilon(1e-8));
}

TEST_CASE("derivatives agree with central differences at 100 random points "
          "per model") {
    oracle::Uniform rnd(20240817);
    for (ClosureKind kind : kAllKinds) {
        const auto m = make(kind);
        int done = 0;
        while (done < 100) {
            const double r = rnd(-5.0, 5.0);
            if (std::abs(1.0 + m.rate() * r) < 0.05) continue;
            ++done;
            const double h = 1e-6 * std::max(1.0, std::abs(r));
            const double fd1 = oracle::central_diff(
                [&](double x) { return m.f1(x); }, r, h);
            const double fd2 = oracle::central_diff(
                [&](double x) { return m.f2(x); }, r, h);
            REQUIRE(m.df1(r) ==
                    Approx(fd1).epsilon(1e-7).margin(1e-12));
            REQUIRE(m.df2(r) ==
                    Approx(fd2).epsilon(1e-7).margin(1e-12));
        }
    }
}

TEST_CASE("richardson number") {
    const PhysicalConstants k;
    REQUIRE(richardson({1.0, 0.0, 0.0}, k) == 0.0);
    REQUIRE_THROWS_AS(richardson({0.0, 0.0, 1.0}, k), ZeroShearError);
    REQUIRE(richardson({1.0, 1.0, -k.rho0 / k.g}, k) ==
            Approx(0.5).epsilon(1e-14));
}

TEST_CASE("richardson is invariant under (theta,beta)->s(theta,beta), "
          "psi->s^2 psi for power-of-two s") {
    const PhysicalConstants k;
    oracle::Uniform rnd(7);
    for (int i = 0; i < 50; ++i) {
        const ShearState s{rnd(-2, 2), rnd(-2, 2), rnd(-3, 3)};
        if (s.theta * s.theta + s.beta * s.beta == 0.0) continue;
        for (double f : {0.25, 0.5, 2.0, 8.0, 1024.0}) {
            const ShearState scaled{s.theta * f, s.beta * f, s.psi * f * f};
            REQUIRE(richardson(scaled, k) == richardson(s, k));  // exact
        }
    }
}

TEST_CASE("richardson gradient") {
    const PhysicalConstants k;
    const auto g0 = richardson_gradient({1.0, 0.0, 0.0}, k);
    REQUIRE(g0[0] == 0.0);
    REQUIRE(g0[1] == 0.0);
    REQUIRE(g0[2] == Approx(-k.g / k.rho0).epsilon(1e-15));

    REQUIRE_THROWS_AS(richardson_gradient({0.0, 0.0, 1.0}, k), ZeroShearError);

    // matches finite differences of richardson
    oracle::Uniform rnd(99);
    for (int i = 0; i < 50; ++i) {
        const ShearState s{rnd(-2, 2), rnd(-2, 2), rnd(-3, 3)};
        if (s.theta * s.theta + s.beta * s.beta < 1e-3) continue;
        const auto grad = richardson_gradient(s, k);
        const double h = 1e-7;
        const double fd_t = oracle::central_diff(
            [&](double x) { return richardson({x, s.beta, s.psi}, k); },
            s.theta, h);
        const double fd_b = oracle::central_diff(
            [&](double x) { return richardson({s.theta, x, s.psi}, k); },
            s.beta, h);
        const double fd_p = oracle::central_diff(
            [&](double x) { return richardson({s.theta, s.beta, x}, k); },
            s.psi, h);
        REQUIRE(grad[0] == Approx(fd_t).epsilon(1e-7).margin(1e-10));
        REQUIRE(grad[1] == Approx(fd_b).epsilon(1e-7).margin(1e-10));
        REQUIRE(grad[2] == Approx(fd_p).epsilon(1e-7).margin(1e-10));
    }

    // swapping (theta, beta) swaps the first two components
    const auto ga = richardson_gradient({0.7, -0.3, 1.2}, k);
    const auto gb = richardson_gradient({-0.3, 0.7, 1.2}, k);
    REQUIRE(ga[0] == gb[1]);
    REQUIRE(ga[1] == gb[0]);
    REQUIRE(ga[2] == gb[2]);
}

TEST_CASE("invalid interval endpoints") {
    // left endpoints located by the scan, right endpoints are the poles
    const auto band213 = invalid_interval(make(ClosureKind::R213));
    REQUIRE(band213.has_value());
    REQUIRE(band213->first == Approx(-3.1311424637535357).margin(1e-9));
    REQUIRE(band213->second == Approx(-0.2).margin(1e-15));

    const auto band23 = invalid_interval(make(ClosureKind::R23));
    REQUIRE(band23.has_value());
    REQUIRE(band23->first == Approx(-2.25).margin(1e-9));
    REQUIRE(band23->second == Approx(-0.1).margin(1e-15));

    REQUIRE_FALSE(invalid_interval(make(ClosureKind::R224)).has_value());
    REQUIRE_FALSE(invalid_interval(make(ClosureKind::R22)).has_value());
}

TEST_CASE("f2 sign on a dense scan matches the invalid interval") {
    for (ClosureKind kind : kAllKinds) {
        const auto m = make(kind);
        const auto band = invalid_interval(m);
        const int n = 10000;
        for (int i = 0; i <= n; ++i) {
            const double r = -5.0 + 10.0 * i / n;
            if (std::abs(1.0 + m.rate() * r) < 1e-6) continue;
            const bool inside =
                band && r > band->first + 1e-9 && r < band->second - 1e-9;
            const bool outside =
                !band || r < band->first - 1e-9 || r > band->second + 1e-9;
            if (inside) REQUIRE(m.f2(r) < 0.0);
            if (outside) REQUIRE(m.f2(r) > 0.0);
        }
    }
}

TEST_CASE("R-2-2-4 diffusivity never dips below its floor") {
    const auto m = make(ClosureKind::R224);
    for (int i = 0; i <= 100000; ++i) {
        const double r = -50.0 + 100.0 * i / 100000;
        if (std::abs(1.0 + m.rate() * r) < 1e-6) continue;
        REQUIRE(m.f2(r) >= m.coeffs().alpha2);
    }
}

TEST_CASE("for R > 0 every model keeps f1 in (alpha1, alpha1+beta1] and f2 "
          "positive, both decaying") {
    for (ClosureKind kind : kAllKinds) {
        const auto m = make(kind);
        double prev1 = m.f1(1e-12), prev2 = m.f2(1e-12);
        for (int i = 1; i <= 2000; ++i) {
            const double r = 10.0 * i / 2000.0;
            const double v1 = m.f1(r), v2 = m.f2(r);
            REQUIRE(v1 > m.coeffs().alpha1);
            REQUIRE(v1 <= m.coeffs().alpha1 + m.coeffs().beta1);
            REQUIRE(v2 > 0.0);
            REQUIRE(v1 <= prev1);
            REQUIRE(v2 <= prev2);
            prev1 = v1;
            prev2 = v2;
        }
    }
}

TEST_CASE("OPA coefficients shift the R-2-1-3 band") {
    // the band left endpoint depends on the coefficient set; with OPA it sits
    // far from the PP81 value (no agreement is forced)
    const auto band = invalid_interval(ClosureModel(ClosureKind::R213, kOPA));
    REQUIRE(band.has_value());
    REQUIRE(band->second == Approx(-0.2).margin(1e-15));
    REQUIRE(band->first < -9.0);
}
