#include <cmath>

#include "crhyp/subelliptic.hpp"
#include "crhyp/riemannian.hpp"
#include "crhyp/special.hpp"
#include "doctest.h"

using namespace crhyp;

namespace {

struct Ref {
    int n;
    double t, r, theta, value;
};

// High-precision contour quadrature references (tests/reference/generate_reference.py)
const Ref kRefs[] = {
    {1, 0.5, 0.0, 0.0, 0.075816332464079167824},
    {1, 0.5, 1.0, 0.0, 0.026517597640936913062},
    {1, 0.5, 1.0, 0.5, 0.017830479268800122782},
    {1, 0.5, 0.5, 1.0, 0.00765207527557709239},
    {2, 0.5, 0.0, 0.0, 0.0023405362602372716293},
    {2, 0.5, 0.5, 1.0, 0.00049831242163141523156},
    {2, 0.5, 1.0, 0.5, 0.00060248521749089506398},
    {1, 0.25, 1.0, 0.5, 0.0271677185678134805},
    {1, 0.01, 0.0, 0.0, 309.39057304661497458},
    {1, 0.01, 1.0, 0.0, 4.6690489020045128941e-10},
    {1, 0.01, 1.0, 0.5, 3.1215346898021550838e-20},
    {1, 0.01, 0.0, 0.5, 1.8570248137052796926e-34},
    {2, 0.01, 0.0, 0.0, 1602.5416304372740016},
};

}  // namespace

TEST_CASE("p_cover reference values") {
    for (const Ref& ref : kRefs) {
        EvalContext ctx(ref.n, Space::UniversalCover);
        EvalResult p = p_cover(ctx, HeatTime(ref.t), CylPoint(ref.r, ref.theta));
        INFO("n=" << ref.n << " t=" << ref.t << " r=" << ref.r << " theta=" << ref.theta);
        CHECK(p.value == doctest::Approx(ref.value).epsilon(1e-9));
        CHECK(!p.has(kTruncated));
    }
}

TEST_CASE("p_cover_double matches references") {
    for (const Ref& ref : kRefs) {
        if (ref.t < 0.05) continue;
        EvalContext ctx(ref.n, Space::UniversalCover);
        double im = 0;
        EvalResult p = p_cover_double(ctx, HeatTime(ref.t), CylPoint(ref.r, ref.theta), {}, &im);
        INFO("n=" << ref.n << " t=" << ref.t << " r=" << ref.r << " theta=" << ref.theta);
        CHECK(p.value == doctest::Approx(ref.value).epsilon(1e-7));
        CHECK(std::abs(im) < 1e-10 * p.value);
    }
}

TEST_CASE("p_cover theta symmetry") {
    EvalContext ctx(1, Space::UniversalCover);
    for (double th : {0.7, 0.3, 2.0}) {
        double a = p_cover(ctx, HeatTime(0.5), {1.0, th}).value;
        double b = p_cover(ctx, HeatTime(0.5), {1.0, -th}).value;
        CHECK(a == b);
        double c = p_cover(ctx, HeatTime(0.5), {1.0, th}).value;
        CHECK(a == c);
        double pa = p_cover(ctx, HeatTime(0.5), {1.0, th + 1e-9}).value;
        double pb = p_cover(ctx, HeatTime(0.5), {1.0, -th - 1e-9}).value;
        CHECK(pa == doctest::Approx(pb).epsilon(1e-12));
    }
}

TEST_CASE("p_cover at the pole against a brute-force 1D oracle") {
    for (double t : {0.25, 0.5}) {
        EvalContext ctx(1, Space::UniversalCover);
        auto f = [&](double y) {
            return std::exp(y * y / (4 * t)) * q_exact(ctx, HeatTime(t), RiemannianArg(std::abs(y))).value;
        };
        const int m = 1 << 16;
        const double a = -26, b = 26, h = (b - a) / m;
        double s = f(a) + f(b);
        for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        double oracle = s * h / 3 / std::sqrt(4 * kPi * t);
        CHECK(p_cover(ctx, HeatTime(t), {0.0, 0.0}).value == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("p_cover positivity and decay") {
    for (int n = 1; n <= 2; ++n) {
        EvalContext ctx(n, Space::UniversalCover);
        for (double t : {0.25, 0.5, 1.0}) {
            for (int i = 0; i <= 6; ++i)
                for (int j = 0; j <= 8; ++j) {
                    double r = 0.5 * i, th = -2 * kPi + kPi * j / 2;
                    INFO("n=" << n << " t=" << t << " r=" << r << " theta=" << th);
                    CHECK(p_cover(ctx, HeatTime(t), {r, th}).value > 0);
                }
            double prev = INFINITY;
            for (int i = 0; i <= 29; ++i) {
                double v = p_cover(ctx, HeatTime(t), {0.1 + 0.1 * i, 0.0}).value;
                CHECK(v < prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("p_cover monotone decay in r") {
    for (int n = 1; n <= 2; ++n) {
        EvalContext ctx(n, Space::UniversalCover);
        for (double t : {0.25, 0.5, 1.0})
            for (double th : {0.0, 0.5, 2.0}) {
                double prev = INFINITY;
                for (int i = 0; i <= 29; ++i) {
                    double v = p_cover(ctx, HeatTime(t), {0.1 + 0.1 * i, th}).value;
                    INFO("n=" << n << " t=" << t << " theta=" << th << " r=" << 0.1 + 0.1 * i);
                    CHECK(v < prev);
                    prev = v;
                }
            }
    }
}

TEST_CASE("p_cover_double regime") {
    EvalContext ctx(1, Space::UniversalCover);
    CHECK_THROWS_AS(p_cover_double(ctx, HeatTime(0.01), {1.0, 0.5}), RegimeError);
}

TEST_CASE("p_compact periodicity") {
    EvalContext ctx(1, Space::CompactCircleBundle);
    double a = p_compact(ctx, HeatTime(0.5), {1.0, kPi}).value;
    double b = p_compact(ctx, HeatTime(0.5), {1.0, -kPi}).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
    for (double th : {0.3, -1.2, 2.9}) {
        double base = p_compact(ctx, HeatTime(0.5), {0.7, th}).value;
        double shifted = p_compact(ctx, HeatTime(0.5), {0.7, canonical_theta(th + 2 * kPi)}).value;
        CHECK(shifted == doctest::Approx(base).epsilon(1e-15));
    }
}

TEST_CASE("p_compact truncation") {
    for (int n = 1; n <= 2; ++n) {
        EvalContext ctx(n, Space::CompactCircleBundle);
        for (double t : {0.1, 0.25, 0.5})
            for (auto [r, th] : {std::pair{1.0, 0.0}, {0.5, 0.3}, {0.0, kPi}, {2.0, -2.0}}) {
                WrapSpec w3, w6;
                w3.k_max = 3;
                w6.k_max = 6;
                double a = p_compact(ctx, HeatTime(t), {r, th}, {}, w3).value;
                double b = p_compact(ctx, HeatTime(t), {r, th}, {}, w6).value;
                CHECK(a == doctest::Approx(b).epsilon(1e-10));
            }
    }
    EvalContext ctx(1, Space::CompactCircleBundle);
    WrapSpec tight;
    tight.k_max = 1;
    tight.tail_tol = 1e-30;
    CHECK_THROWS_AS(p_compact(ctx, HeatTime(4.0), {0.5, 0.3}, {}, tight), ConvergenceError);
}

TEST_CASE("p_compact term by term") {
    EvalContext cc(1, Space::CompactCircleBundle), cu(1, Space::UniversalCover);
    const double t = 0.25, r = 0.5, th = 0.3;
    double compact = p_compact(cc, HeatTime(t), {r, th}).value;
    double centre = p_cover(cu, HeatTime(t), {r, th}).value;
    double sum = 0, prev_gap = INFINITY;
    for (int k = 1; k <= 3; ++k) {
        double plus = p_cover(cu, HeatTime(t), {r, th + 2 * kPi * k}).value;
        double minus = p_cover(cu, HeatTime(t), {r, th - 2 * kPi * k}).value;
        CHECK(plus > 0);
        CHECK(minus > 0);
        sum += plus + minus;
        double gap = std::abs(compact - centre - sum);
        CHECK(gap <= prev_gap);
        prev_gap = gap;
    }
    CHECK(compact - centre == doctest::Approx(sum).epsilon(1e-8));
    CHECK(p_kernel(cc, HeatTime(t), {r, th}).value == compact);
    CHECK(p_kernel(cu, HeatTime(t), {r, th}).value == centre);
}

TEST_CASE("p_cover grows off the axis") {
    // real-line oracle values at t = 0.25
    EvalContext ctx(1, Space::UniversalCover);
    const double r[] = {0.1, 0.5, 1.0};
    const double ref[] = {1.14074512662599333543357e-7, 6.54412000899018815095501e-7, 3.11863534256703949961972e-6};
    for (int i = 0; i < 3; ++i)
        CHECK(p_cover(ctx, HeatTime(0.25), {r[i], 2.0}).value == doctest::Approx(ref[i]).epsilon(1e-9));
    const double r2[] = {0.1, 0.2, 0.4};
    const double ref2[] = {0.0485747618814546030831615, 0.0495898526917223356453246, 0.0511078485267679733712495};
    for (int i = 0; i < 3; ++i)
        CHECK(p_cover(ctx, HeatTime(0.25), {r2[i], 0.5}).value == doctest::Approx(ref2[i]).epsilon(1e-9));
}
