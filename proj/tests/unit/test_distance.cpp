#include <cmath>

#include "crhyp/distance.hpp"
#include "crhyp/special.hpp"
#include "doctest.h"

using namespace crhyp;

TEST_CASE("phi_solve reference roots") {
    CHECK(phi_solve(1.0, 0.0).phi == 0.0);
    auto a = phi_solve(1.0, 0.5);
    auto b = phi_solve(1.0, 1.0);
    CHECK(a.phi == doctest::Approx(-1.2064020635629085087).epsilon(1e-13));
    CHECK(b.phi == doctest::Approx(-1.6649341511545516714).epsilon(1e-13));
    CHECK(phi_solve(0.5, 1.0).phi == doctest::Approx(-2.3743779962996199013).epsilon(1e-13));
    CHECK(a.residual <= 1e-12);
    CHECK(b.residual <= 1e-12);
    CHECK(b.phi < a.phi);
    CHECK(phi_solve(1.0, -1.0).phi == -b.phi);
}

TEST_CASE("distance reference values") {
    EvalContext ctx(1, Space::UniversalCover);
    CHECK(sr_distance(ctx, {1.0, 0.5}).d2 == doctest::Approx(1.934640328905761277).epsilon(1e-12));
    CHECK(sr_distance(ctx, {0.5, 1.0}).d2 == doctest::Approx(5.0466870150119488214).epsilon(1e-12));
    CHECK(sr_distance(ctx, {1.0, 1.0}).d2 == doctest::Approx(4.1559905908340274783).epsilon(1e-12));
    CHECK(sr_distance(ctx, {0.0, kPi}).d2 == doctest::Approx(3 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("saddle map is strictly decreasing through the origin") {
    for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        double lim = kPi - std::acos(1.0 / std::cosh(r));
        double prev = INFINITY;
        for (int i = 1; i < 1000; ++i) {
            double phi = -lim + 2 * lim * i / 1000.0;
            double v = saddle_equation(r, 0.0, phi);
            CHECK(v < prev);
            prev = v;
        }
        CHECK(phi_solve(r, 0.0).phi == 0.0);
    }
}

TEST_CASE("phi_solve over a grid") {
    for (int i = 1; i <= 20; ++i)
        for (int j = 0; j < 20; ++j) {
            double r = 3.0 * i / 20, th = -2 * kPi + 4 * kPi * j / 19;
            PhiSolution s = phi_solve(r, th);
            INFO("r=" << r << " theta=" << th);
            CHECK(s.residual <= 1e-12);
            CHECK(std::abs(saddle_equation(r, th, s.phi)) <= 1e-12 * (1 + std::abs(th)));
            if (th != 0) CHECK(std::signbit(s.phi) != std::signbit(th));
            CHECK(s.continued == (std::abs(s.phi) >= s.strip_bound));
            if (!s.continued) CHECK(s.u > 1);
        }
    CHECK(phi_solve(1.0, 1.0).strip_bound == doctest::Approx(std::acos(1 / std::cosh(1.0))).epsilon(1e-15));
    CHECK_THROWS_AS(phi_solve(0.0, 1.0), DomainError);
}

TEST_CASE("distance properties") {
    EvalContext ctx(1, Space::UniversalCover);
    CHECK(sr_distance(ctx, {0.0, 0.0}).d == 0.0);
    for (double r : {0.5, 1.0, 2.0}) {
        CHECK(sr_distance(ctx, {r, 0.0}).d == doctest::Approx(r).epsilon(1e-12));
        CHECK(sr_distance(ctx, {r, 0.0}).regime == DistanceRegime::Axis);
    }
    for (double th : {0.1, 1.0, 3.0}) {
        double d2 = sr_distance(ctx, {0.0, th}).d2;
        CHECK(d2 == doctest::Approx(2 * kPi * th + th * th).epsilon(1e-14));
        CHECK(sr_distance(ctx, {0.0, th}).regime == DistanceRegime::Origin);
    }
    for (double r : {0.2, 1.0, 2.5}) {
        double prev = -1;
        for (int j = 0; j <= 40; ++j) {
            double th = 2 * kPi * j / 40;
            DistanceValue a = sr_distance(ctx, {r, th}), b = sr_distance(ctx, {r, -th});
            CHECK(a.d2 == b.d2);
            CHECK(a.d2 > prev);
            CHECK(a.d == doctest::Approx(std::sqrt(a.d2)).epsilon(1e-15));
            prev = a.d2;
        }
    }
    for (double th : {0.5, 1.0, 2.0}) {
        double origin = 2 * kPi * th + th * th;
        CHECK(std::abs(sr_distance(ctx, {1e-3, th}).d2 - origin) <= 0.02 * origin);
    }
}

TEST_CASE("distance agrees with the root formula") {
    EvalContext ctx(1, Space::UniversalCover);
    for (auto [r, th] : {std::pair{1.0, 0.2}, {2.0, 0.5}, {0.8, 0.1}, {1.0, 1.0}, {0.5, -2.0}}) {
        PhiSolution s = phi_solve(r, th);
        double k = (s.phi - th) * std::tanh(r) / std::sin(s.phi);
        CHECK(sr_distance(ctx, {r, th}).d2 == doctest::Approx(k * k).epsilon(1e-10));
    }
}

TEST_CASE("saddle curvature") {
    CHECK(f_second_derivative(1.0, 0.0).f2 == doctest::Approx(2 * (1 / std::tanh(1.0) - 1)).epsilon(1e-12));
    CHECK(f_second_derivative(1.0, 0.0).f2 == doctest::Approx(0.62607).epsilon(1e-5));
    CHECK(f_second_derivative(1e-4, 0.0).f2 < 1e-8);
    for (int i = 1; i <= 15; ++i)
        for (int j = 0; j <= 20; ++j) {
            double r = 3.0 * i / 15, th = -2 * kPi + 4 * kPi * j / 20;
            CHECK(f_second_derivative(r, th).f2 > 0);
        }
}

TEST_CASE("asymptotic constants") {
    const double A[] = {4.9348022005446793094, 3.2898681336964528729, 2.6282702223837332737};
    const double B[] = {-4.9348022005446793094, -11.159472534785811492, -18.719629800908920154};
    for (int n = 1; n <= 3; ++n) {
        AsymptoticConstants c = an_bn_constants(n);
        CHECK(c.A_n == doctest::Approx(A[n - 1]).epsilon(1e-10));
        CHECK(c.B_n == doctest::Approx(B[n - 1]).epsilon(1e-10));
        CHECK(c.A_n > 0);
    }
    CHECK(an_bn_constants(1).A_n == doctest::Approx(kPi * kPi / 2).epsilon(1e-12));
    CHECK(an_bn_constants(2).A_n == doctest::Approx(kPi * kPi / 3).epsilon(1e-12));
}

TEST_CASE("asymptotic regimes") {
    for (int n = 1; n <= 2; ++n) {
        EvalContext ctx(n, Space::UniversalCover);
        AsymptoticConstants c = an_bn_constants(n);
        for (double t : {0.01, 0.1}) {
            double v = asym_diagonal(ctx, HeatTime(t)).value * std::pow(4 * kPi * t, n + 1);
            CHECK(v - c.A_n == doctest::Approx(c.B_n * t).epsilon(1e-10));
        }
    }
    EvalContext c1(1, Space::UniversalCover);
    for (double th : {0.5, -0.5, 2.0}) {
        double t = 0.01, a = std::abs(th);
        double expect = std::exp(-(2 * kPi * a + a * a) / (4 * t)) / (8 * t * t);
        CHECK(asym_vertical(c1, HeatTime(t), th).value == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS_AS(asym_vertical(c1, HeatTime(0.01), 0.0), RegimeError);
    CHECK_THROWS_AS(asym_axis(c1, HeatTime(0.01), 0.0), RegimeError);
    for (int n = 1; n <= 3; ++n) {
        EvalContext ctx(n, Space::UniversalCover);
        for (double r : {0.5, 1.0, 2.0}) {
            double g = asym_general(ctx, HeatTime(0.01), {r, 1e-8}).value;
            double ax = asym_axis(ctx, HeatTime(0.01), r).value;
            CHECK(g == doctest::Approx(ax).epsilon(1e-6));
        }
    }
    // exponent is -d^2/4t: ratio at two times isolates it
    for (auto [r, th] : {std::pair{1.0, 0.5}, {0.5, 1.0}}) {
        double t1 = 0.01, t2 = 0.02;
        double g1 = asym_general(c1, HeatTime(t1), {r, th}).value;
        double g2 = asym_general(c1, HeatTime(t2), {r, th}).value;
        double d2 = sr_distance(c1, {r, th}).d2;
        // prefactor scales as t^{-(n+1/2)}
        double ex = std::log(g1 / g2) - 1.5 * std::log(t2 / t1);
        CHECK(ex == doctest::Approx(d2 * (1 / (4 * t2) - 1 / (4 * t1))).epsilon(1e-12));
    }
}
