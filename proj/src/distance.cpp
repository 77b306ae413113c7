#include "crhyp/distance.hpp"

#include <cmath>

#include "crhyp/quadrature.hpp"
#include "crhyp/special.hpp"

namespace crhyp {

namespace {

struct SaddleEval {
    double f, u, um1, up1;
};

// Equation for theta_neg = -a <= 0 in the variable s = phi_max - phi, phi >= 0.
SaddleEval eval_s(double r, double a, double s) {
    const double ch = std::cosh(r), sh = std::sinh(r);
    const double phi = (kPi - std::atan(sh)) - s;
    const double sp = std::sin(0.5 * phi), ss = std::sin(0.5 * s), shr = std::sinh(0.5 * r);
    SaddleEval e;
    e.um1 = 2.0 * shr * shr - 2.0 * ch * sp * sp;
    e.up1 = 2.0 * ss * ss + sh * std::sin(s);
    e.u = ch * std::cos(phi);
    e.f = (phi + a) - ch * std::sin(phi) * psi_real(e.u, e.um1, e.up1);
    return e;
}

}  // namespace

double saddle_equation(double r, double theta, double phi) {
    const double ch = std::cosh(r);
    const double u = ch * std::cos(phi);
    return (phi - theta) - ch * std::sin(phi) * psi_real(u);
}

PhiSolution phi_solve(double r, double theta) {
    if (!(r > 0) || !std::isfinite(r)) throw DomainError("phi_solve: r must be positive");
    if (!std::isfinite(theta)) throw DomainError("phi_solve: theta must be finite");
    const double sh = std::sinh(r), ch = std::cosh(r), shr = std::sinh(0.5 * r);
    PhiSolution sol;
    sol.strip_bound = std::atan(sh);
    if (theta == 0.0) {
        sol.u = ch;
        sol.u_minus_1 = 2.0 * shr * shr;
        sol.u_plus_1 = ch + 1.0;
        return sol;
    }
    const double a = std::abs(theta);
    const double smax = kPi - sol.strip_bound;
    double lo = 1e-12 * smax, hi = smax * (1.0 - 1e-12);
    SaddleEval flo = eval_s(r, a, lo), fhi = eval_s(r, a, hi);
    while (flo.f > 0 && lo > 1e-300) {
        hi = lo;
        fhi = flo;
        lo *= 1e-3;
        flo = eval_s(r, a, lo);
    }
    if (!(flo.f <= 0 && fhi.f >= 0)) throw Error("phi_solve: bracket lost (monotonicity violated)");
    SaddleEval best = std::abs(flo.f) < std::abs(fhi.f) ? flo : fhi;
    double sbest = std::abs(flo.f) < std::abs(fhi.f) ? lo : hi;
    while (hi - lo > 1e-3) {
        double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        SaddleEval fm = eval_s(r, a, mid);
        if (fm.f > 0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    // Illinois-modified regula falsi
    double wlo = 1.0, whi = 1.0;
    int side = 0;
    best = std::abs(flo.f) < std::abs(fhi.f) ? flo : fhi;
    sbest = std::abs(flo.f) < std::abs(fhi.f) ? lo : hi;
    for (int it = 0; it < 200 && std::abs(best.f) > 1e-15; ++it) {
        double x = (lo * fhi.f * whi - hi * flo.f * wlo) / (fhi.f * whi - flo.f * wlo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) break;
        SaddleEval fx = eval_s(r, a, x);
        if (std::abs(fx.f) < std::abs(best.f)) {
            best = fx;
            sbest = x;
        }
        if (fx.f > 0) {
            hi = x;
            fhi = fx;
            whi = 1.0;
            if (side == 1) wlo *= 0.5;
            side = 1;
        } else {
            lo = x;
            flo = fx;
            wlo = 1.0;
            if (side == -1) whi *= 0.5;
            side = -1;
        }
    }
    const double phi = smax - sbest;
    sol.phi = theta > 0 ? -phi : phi;
    sol.u = best.u;
    sol.u_minus_1 = best.um1;
    sol.u_plus_1 = best.up1;
    sol.residual = std::abs(best.f);
    sol.continued = phi > sol.strip_bound;
    return sol;
}

const char* regime_name(DistanceRegime r) {
    switch (r) {
        case DistanceRegime::Origin: return "origin";
        case DistanceRegime::Axis: return "axis";
        case DistanceRegime::General: return "general";
    }
    return "?";
}

DistanceValue sr_distance(const EvalContext& ctx, CylPoint pt) {
    const double th = ctx.space == Space::CompactCircleBundle ? canonical_theta(pt.theta) : pt.theta;
    DistanceValue out;
    if (th == 0.0) {
        out.d = pt.r;
        out.d2 = pt.r * pt.r;
        out.regime = pt.r == 0.0 ? DistanceRegime::Origin : DistanceRegime::Axis;
        return out;
    }
    if (pt.r < 1e-4) {
        out.d2 = 2.0 * kPi * std::abs(th) + th * th;
        out.d = std::sqrt(out.d2);
        out.regime = DistanceRegime::Origin;
        return out;
    }
    PhiSolution s = phi_solve(pt.r, th);
    out.d = std::sinh(pt.r) * psi_real(s.u, s.u_minus_1, s.u_plus_1);
    out.d2 = out.d * out.d;
    out.regime = DistanceRegime::General;
    return out;
}

SaddleCurvature f_second_derivative(double r, double theta) {
    if (!(r > 0)) throw DomainError("f_second_derivative: r must be positive");
    PhiSolution s = phi_solve(r, theta);
    const double sh = std::sinh(r);
    return {2.0 * sh * sh * psi_curvature_ratio(s.u, s.u_minus_1, s.u_plus_1)};
}

AsymptoticConstants an_bn_constants(int n, const QuadSpec& spec) {
    if (n < 1) throw DomainError("an_bn_constants: n must be >= 1");
    double Y = 10.0;
    for (int i = 0; i < 50; ++i) Y = (spec.exponent_cutoff + 5.0) / n + std::log(2.0 * Y);
    auto base = [n](double y) { return std::pow(y_over_sinh(y), n); };
    EvalResult a = integrate_adaptive(base, 0.0, Y, spec);
    EvalResult b = integrate_adaptive(
        [&](double y) { return base(y) * (double(n) * n + double(n) * (n - 1) * s_bracket(y)); }, 0.0, Y, spec);
    return {n, 2.0 * a.value, -2.0 * b.value};
}

EvalResult asym_diagonal(const EvalContext& ctx, HeatTime t) {
    AsymptoticConstants c = an_bn_constants(ctx.n);
    double v = std::pow(4.0 * kPi * t, -(ctx.n + 1)) * (c.A_n + c.B_n * t);
    return {v, 0.0, kNone};
}

EvalResult asym_vertical(const EvalContext& ctx, HeatTime t, double theta) {
    const double th = ctx.space == Space::CompactCircleBundle ? canonical_theta(theta) : theta;
    if (th == 0.0) throw RegimeError("asym_vertical: theta = 0", "asym_diagonal");
    const int n = ctx.n;
    const double a = std::abs(th);
    double v = std::pow(a, n - 1) / (std::pow(2.0, 3 * n) * std::pow(double(t), 2 * n) * factorial(n - 1)) *
               std::exp(-(2.0 * kPi * a + a * a) / (4.0 * t));
    return {v, 0.0, kNone};
}

EvalResult asym_axis(const EvalContext& ctx, HeatTime t, double r) {
    if (!(r > 0)) throw RegimeError("asym_axis: r = 0", "asym_diagonal");
    const int n = ctx.n;
    double rcoth_m1 = -r * r * s_bracket(r);
    double v = std::exp(-r * r / (4.0 * t)) * std::pow(4.0 * kPi * t, -(n + 0.5)) * std::pow(y_over_sinh(r), n) /
               std::sqrt(rcoth_m1);
    return {v, 0.0, kNone};
}

EvalResult asym_general(const EvalContext& ctx, HeatTime t, CylPoint pt) {
    const double th = ctx.space == Space::CompactCircleBundle ? canonical_theta(pt.theta) : pt.theta;
    if (!(pt.r > 0)) throw RegimeError("asym_general: r = 0", "asym_vertical");
    if (th == 0.0) throw RegimeError("asym_general: theta = 0", "asym_axis");
    PhiSolution s = phi_solve(pt.r, th);
    const double sh = std::sinh(pt.r);
    const double psi = psi_real(s.u, s.u_minus_1, s.u_plus_1);
    const double f2 = 2.0 * sh * sh * psi_curvature_ratio(s.u, s.u_minus_1, s.u_plus_1);
    const double d2 = sh * sh * psi * psi;
    double v = std::pow(4.0 * kPi * t, -(ctx.n + 0.5)) * std::pow(psi, ctx.n) * std::sqrt(2.0 / f2) *
               std::exp(-d2 / (4.0 * t));
    return {v, 0.0, kNone};
}

}  // namespace crhyp
