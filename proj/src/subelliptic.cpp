#include "crhyp/subelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "crhyp/distance.hpp"
#include "crhyp/quadrature.hpp"
#include "crhyp/riemannian.hpp"
#include "crhyp/special.hpp"

namespace crhyp {

namespace {

using cplx = std::complex<double>;

struct Phase {
    cplx exponent;   // (y - i theta)^2/4t - A0/4t
    cplx prefactor;  // q prefactor
};

Phase phase_at(int n, double t, double r, double theta, double c, double a) {
    const double shr = std::sinh(0.5 * r);
    if (c == 0.0) {
        double sy = std::sinh(0.5 * a);
        double w = shr * shr * std::cosh(a) + sy * sy;
        double delta = 2.0 * std::asinh(std::sqrt(w));
        ExpScaled<double> q = q_scaled(n, t, delta);
        cplx e = cplx((a - delta) * (a + delta) - theta * theta, -2.0 * a * theta) / (4.0 * t);
        return {e, q.prefactor};
    }
    cplx y(a, c);
    cplx sy = std::sinh(0.5 * y);
    cplx w = -(shr * shr * std::cosh(y) + sy * sy);
    ExpScaled<cplx> q = q_scaled(n, t, w);
    cplx d = y - cplx(0.0, theta);
    return {d * d / (4.0 * t) + q.exponent, q.prefactor};
}

double choose_shift(double t, double r, double a_theta, double* width) {
    if (a_theta == 0.0) {
        double f2 = r > 0 ? -2.0 * r * r * s_bracket(r) : 0.0;
        *width = f2 > 0 ? std::sqrt(4.0 * t / f2) : 1.0;
        return 0.0;
    }
    const double eps = std::min(0.5, 10.0 * t / a_theta);
    if (std::atan(std::sinh(r)) < 0.5 * eps) {
        *width = eps;
        return -(kPi - eps);
    }
    PhiSolution s = phi_solve(r, a_theta);
    const double sh = std::sinh(r);
    double f2 = 2.0 * sh * sh * psi_curvature_ratio(s.u, s.u_minus_1, s.u_plus_1);
    *width = std::sqrt(4.0 * t / f2);
    return s.phi;
}

}  // namespace

CoverContour cover_contour(int n, double t, double r, double theta, const QuadSpec& spec) {
    const double at = std::abs(theta);
    CoverContour cc;
    double width = 1.0;
    cc.c = choose_shift(t, r, at, &width);
    Phase p0 = phase_at(n, t, r, at, cc.c, 0.0);
    cc.x0 = p0.exponent.real();

    const double cap = spec.y_halfwidth > 0 ? spec.y_halfwidth
                                            : std::max(20.0, 8.0 * std::sqrt(t) * spec.exponent_cutoff);
    auto logmag = [&](double a) {
        Phase p = phase_at(n, t, r, at, cc.c, a);
        return p.exponent.real() - cc.x0 + std::log(std::abs(p.prefactor));
    };
    double maxlog = logmag(0.0);
    double a = 0.0, lg = maxlog;
    const double step = std::min(0.5, std::max(width, 0.05));
    for (;;) {
        a += std::max(step, 0.2 * a);
        if (a >= cap) {
            a = cap;
            lg = logmag(a);
            cc.truncated = lg > maxlog - spec.exponent_cutoff;
            break;
        }
        lg = logmag(a);
        if (!std::isfinite(lg)) break;
        maxlog = std::max(maxlog, lg);
        if (a >= 1.0 && lg < maxlog - spec.exponent_cutoff - 3.0) break;
    }
    cc.y_max = a;
    cc.tail = std::isfinite(lg) ? std::exp(lg) * 2.0 / std::sqrt(4.0 * kPi * t) : 0.0;

    const double w_osc = at > 0 ? 15.0 * (4.0 * kPi * t / at) / spec.nodes_per_unit : 4.0;
    const double w_max = std::min(4.0, w_osc);
    double w = std::min(std::clamp(0.5 * width, 1e-4, 0.5), w_max);
    cc.breaks.push_back(0.0);
    while (cc.breaks.back() < cc.y_max) {
        double x = cc.breaks.back() + w;
        if (x > cc.y_max - 0.25 * w) x = cc.y_max;
        cc.breaks.push_back(x);
        w = std::min(w * 1.5, w_max);
    }
    return cc;
}

double cover_integrand(int n, double t, double r, double theta, const CoverContour& cc, double a) {
    Phase p = phase_at(n, t, r, std::abs(theta), cc.c, a);
    cplx v = p.prefactor * std::exp(p.exponent - cc.x0);
    return 2.0 * v.real() / std::sqrt(4.0 * kPi * t);
}

EvalResult p_cover(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec) {
    spec.validate();
    const int n = ctx.n;
    CoverContour cc = cover_contour(n, t, pt.r, pt.theta, spec);
    const double scale = std::exp(cc.x0);
    double abs_tol_scaled = std::exp(std::log(spec.abs_tol) - cc.x0);
    if (!std::isfinite(abs_tol_scaled)) abs_tol_scaled = std::numeric_limits<double>::max();
    auto f = [&](double a) { return cover_integrand(n, t, pt.r, pt.theta, cc, a); };
    auto q = integrate_panels<double>(f, cc.breaks, abs_tol_scaled, spec.rel_tol,
                                      std::max<int>(spec.max_panels, cc.breaks.size()));
    q.abs_err += cc.tail;
    EvalResult res = finalize(q, abs_tol_scaled, spec.rel_tol, "p_cover");
    res.value *= scale;
    res.abs_err *= scale;
    if (cc.truncated && cc.tail > std::max(abs_tol_scaled, spec.rel_tol * std::abs(q.value)))
        res.flags |= kTruncated;
    if (pt.theta != 0.0) res.flags |= kOscillationResolved;
    return res;
}

EvalResult p_cover_double(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec,
                          double* imag_residue) {
    spec.validate();
    if (t < kIntegralMinTime)
        throw RegimeError("p_cover_double: t below " + std::to_string(kIntegralMinTime), "p_cover");
    const int n = ctx.n;
    const double r = pt.r, th = pt.theta;
    const double shr = std::sinh(0.5 * r);
    auto delta_of = [&](double y) {
        double sy = std::sinh(0.5 * y);
        return 2.0 * std::asinh(std::sqrt(shr * shr * std::cosh(y) + sy * sy));
    };
    double Y = 1.0;
    const double cap = spec.y_halfwidth > 0 ? spec.y_halfwidth
                                            : std::max(20.0, 8.0 * std::sqrt(t) * spec.exponent_cutoff);
    for (; Y < cap; Y += 1.0) {
        double d = delta_of(Y);
        if ((d - Y) * (d + Y) / (4.0 * t) + n * d > spec.exponent_cutoff + 5.0) break;
    }
    bool truncated = Y >= cap;
    Y = std::min(Y, cap);

    QuadSpec inner = spec;
    inner.rel_tol = std::min(spec.rel_tol, 1e-10);
    const EvalContext ictx(n, Space::UniversalCover);
    unsigned inner_flags = 0;
    auto outer = [&](double y) {
        double d = delta_of(y);
        EvalResult q = q_integral(ictx, t, RiemannianArg(d), inner);
        inner_flags |= q.flags;
        // q already contains e^{-d^2/4t}; recombine with the Gaussian in logs
        double lq = std::log(std::abs(q.value));
        if (!std::isfinite(lq)) return cplx(0.0, 0.0);
        cplx e = cplx(y * y - th * th, -2.0 * y * th) / (4.0 * t) + lq;
        return std::exp(e) * (q.value < 0 ? -1.0 : 1.0) / std::sqrt(4.0 * kPi * t);
    };
    const double w_osc = th != 0.0 ? 15.0 * (4.0 * kPi * t / std::abs(th)) / spec.nodes_per_unit : 1.0;
    int panels = static_cast<int>(std::ceil(2.0 * Y / std::min(1.0, w_osc)));
    auto q = integrate_panels<cplx>(outer, uniform_breaks(-Y, Y, panels), spec.abs_tol, spec.rel_tol,
                                    std::max(spec.max_panels, panels));
    QuadOutcome<double> re{q.value.real(), q.abs_err, q.converged, q.panels};
    EvalResult res = finalize(re, spec.abs_tol, spec.rel_tol, "p_cover_double");
    if (imag_residue) *imag_residue = q.value.imag();
    if (std::abs(q.value.imag()) > 10.0 * spec.tolerance(res.value)) res.flags |= kImagResidueLarge;
    if (truncated) res.flags |= kTruncated;
    res.flags |= inner_flags & kTruncated;
    if (th != 0.0) res.flags |= kOscillationResolved;
    return res;
}

int default_k_max(double t, double theta, const QuadSpec& spec) {
    return 1 + static_cast<int>(std::ceil(std::sqrt(4.0 * t * spec.exponent_cutoff) / (2.0 * kPi) +
                                          std::abs(theta) / (2.0 * kPi)));
}

std::vector<double> periodization_arguments(int n, double t, double r, double theta, const QuadSpec& spec,
                                            const WrapSpec& wrap) {
    const double th = canonical_theta(theta);
    const int K = wrap.k_max > 0 ? wrap.k_max : default_k_max(t, th, spec);
    const EvalContext cover(n, Space::UniversalCover);
    const double d0 = sr_distance(cover, CylPoint(r, th)).d2;
    std::vector<double> args;
    for (int k = -K; k <= K; ++k) {
        double a = std::abs(th + 2.0 * kPi * k);
        double dk = sr_distance(cover, CylPoint(r, a)).d2;
        if ((dk - d0) / (4.0 * t) <= spec.exponent_cutoff + 10.0) args.push_back(a);
    }
    std::sort(args.begin(), args.end(), std::greater<>());
    return args;
}

EvalResult p_compact(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec, const WrapSpec& wrap) {
    if (ctx.space != Space::CompactCircleBundle) throw DomainError("p_compact: context space must be compact");
    wrap.validate();
    const double th = canonical_theta(pt.theta);
    const int K = wrap.k_max > 0 ? wrap.k_max : default_k_max(t, th, spec);
    const EvalContext cover(ctx.n, Space::UniversalCover);
    EvalResult sum;
    for (double a : periodization_arguments(ctx.n, t, pt.r, th, spec, wrap)) {
        EvalResult e = p_cover(cover, t, CylPoint(pt.r, a), spec);
        sum.value += e.value;
        sum.abs_err += e.abs_err;
        sum.flags |= e.flags;
    }
    const double next = 2.0 * kPi * (K + 1) - std::abs(th);
    const double d0 = sr_distance(cover, CylPoint(pt.r, th)).d2;
    const double dn = sr_distance(cover, CylPoint(pt.r, next)).d2;
    if ((dn - d0) / (4.0 * t) <= spec.exponent_cutoff + 10.0) {
        EvalResult tail = p_cover(cover, t, CylPoint(pt.r, next), spec);
        if (tail.value > wrap.tail_tol * sum.value) {
            sum.flags |= kTruncated;
            throw ConvergenceError("p_compact: periodization tail above tail_tol; increase k_max", sum);
        }
        sum.abs_err += 2.0 * std::abs(tail.value);
    }
    return sum;
}

EvalResult p_kernel(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec, const WrapSpec& wrap) {
    if (ctx.space == Space::CompactCircleBundle) return p_compact(ctx, t, pt, spec, wrap);
    return p_cover(ctx, t, pt, spec);
}

}  // namespace crhyp
