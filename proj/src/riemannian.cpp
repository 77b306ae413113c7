#include "crhyp/riemannian.hpp"

#include <cmath>

#include "crhyp/quadrature.hpp"
#include "crhyp/special.hpp"

namespace crhyp {

namespace {

using cplx = std::complex<double>;

constexpr double kEps = 2.220446049250313e-16;

double mag(double x) { return std::abs(x); }
double mag(const cplx& z) { return std::abs(z); }

template <class T>
ExpScaled<T> q_from_psi(int n, double t, const Jet<T>& psi, T a0) {
    Jet<T> a(n);
    const double s = -1.0 / (4.0 * t);
    for (int k = 1; k <= n; ++k) a[k] = psi[k - 1] * (2.0 * s / k);
    Jet<T> e = exp(a);
    double pref = std::exp(-double(n) * n * t) / std::sqrt(4.0 * kPi * t) * std::pow(-0.5 / kPi, n) * factorial(n);
    return {e[n] * pref, a0 * s};
}

}  // namespace

template <class T>
Jet<T> psi_jet(T w0, int order) {
    Jet<T> j(order);
    if (mag(w0) < 0.5) {
        double bk = 1.0;
        for (int k = 0; k <= order; ++k) {
            if (k > 0) bk *= k / (k + 0.5);
            T sum(0), wp(1);
            double bm = bk, binom = 1.0;
            for (int m = k; m < k + 600; ++m) {
                T term = wp * (bm * binom);
                sum += term;
                if (m > k + 2 && mag(term) <= 1e-17 * mag(sum)) break;
                bm *= (m + 1) / (m + 1.5);
                binom *= double(m + 1) / double(m + 1 - k);
                wp *= w0;
            }
            j[k] = sum * std::pow(-0.5, k);
        }
        return j;
    }
    T s = std::sqrt(-w0);
    T psi0 = std::asinh(s) / (s * std::sqrt(T(1) + s * s));
    T z0 = T(1) - T(2) * w0;
    T d = T(-4) * w0 * (T(1) - w0);
    j[0] = psi0;
    if (order >= 1) j[1] = (T(1) - z0 * psi0) / d;
    for (int k = 1; k < order; ++k)
        j[k + 1] = (-(2.0 * k + 1.0) * z0 * j[k] - double(k) * j[k - 1]) / (d * double(k + 1));
    return j;
}

template Jet<double> psi_jet<double>(double, int);
template Jet<cplx> psi_jet<cplx>(cplx, int);

ExpScaled<cplx> q_scaled(int n, double t, cplx w) {
    auto psi = psi_jet<cplx>(w, std::max(n - 1, 0));
    cplx as = std::asinh(std::sqrt(-w));
    return q_from_psi<cplx>(n, t, psi, 4.0 * as * as);
}

ExpScaled<double> q_scaled(int n, double t, double delta) {
    double sh = std::sinh(0.5 * delta);
    auto psi = psi_jet<double>(-sh * sh, std::max(n - 1, 0));
    return q_from_psi<double>(n, t, psi, delta * delta);
}

EvalResult q_exact(const EvalContext& ctx, HeatTime t, RiemannianArg delta) {
    double v = q_scaled(ctx.n, t, delta.delta).value();
    return {v, 16.0 * (ctx.n + 1) * kEps * std::abs(v), kNone};
}

EvalResult q_small_time(const EvalContext& ctx, HeatTime t, RiemannianArg delta) {
    const int n = ctx.n;
    const double d = delta.delta;
    double bracket = 1.0 - (double(n) * n + double(n) * (n - 1) * s_bracket(d)) * t;
    double v = std::pow(4.0 * kPi * t, -(n + 0.5)) * std::pow(y_over_sinh(d), n) * std::exp(-d * d / (4.0 * t)) *
               bracket;
    return {v, 5.0 * t * t * std::abs(v), kNone};
}

namespace {

EvalResult q_integral_real_line(int n, double t, double delta, const QuadSpec& spec, double c) {
    const double z = std::cosh(delta);
    const double umax = spec.u_max > 0 ? spec.u_max : std::sqrt(kPi * kPi + 4.0 * t * spec.exponent_cutoff);
    auto g = [&](double u) {
        double e = (kPi * kPi - u * u) / (4.0 * t) - (n + 1) * std::log(std::cosh(u) + z);
        return std::exp(e) * std::sinh(u) * std::sin(kPi * u / (2.0 * t));
    };
    double width = 15.0 * 4.0 * t / spec.nodes_per_unit;
    int panels = std::max(4, static_cast<int>(std::ceil(umax / width)));
    auto q = integrate_panels<double>(g, uniform_breaks(0.0, umax, panels), spec.abs_tol / c, spec.rel_tol,
                                      std::max(spec.max_panels, panels));
    q.value *= c;
    q.abs_err *= c;
    EvalResult r = finalize(q, spec.abs_tol, spec.rel_tol, "q_integral");
    r.flags |= kOscillationResolved;
    return r;
}

// Im of the integral of F(u) = e^{-(u - i pi)^2/4t} sinh u/(cosh u + cosh delta)^{n+1}
// along a small arc near u = i pi; the straight pieces of the deformed path
// contribute only real parts.
EvalResult q_integral_contour(int n, double t, double delta, const QuadSpec& spec, double c) {
    const double ra = std::min(1.5, std::sqrt(8.0 * t));
    const int np1 = n + 1;
    double scale, a0, a1, rho;
    bool corner = delta < 0.5 * ra;
    if (corner) {
        rho = ra;
        a0 = -0.5 * kPi;
        a1 = 0.0;
        scale = 1.0;
    } else {
        rho = std::min(0.5 * delta, 4.0 * t / delta);
        a0 = -kPi;
        a1 = 0.0;
        scale = std::exp(-delta * delta / (4.0 * t));
    }
    auto g = [&](double alpha) {
        cplx e = rho * std::exp(cplx(0.0, alpha));
        cplx v = corner ? e : delta + e;
        cplx gauss = corner ? std::exp(-v * v / (4.0 * t)) : std::exp(-(2.0 * delta * e + e * e) / (4.0 * t));
        cplx den = -2.0 * std::sinh(0.5 * (v + delta)) * std::sinh(0.5 * (v - delta));
        cplx f = gauss * (-std::sinh(v)) / std::pow(den, np1);
        return (f * cplx(0.0, 1.0) * e).imag();
    };
    double cs = c * scale;
    auto q = integrate_panels<double>(g, uniform_breaks(a0, a1, 8), spec.abs_tol / cs, spec.rel_tol,
                                      spec.max_panels);
    q.value *= cs;
    q.abs_err *= cs;
    return finalize(q, spec.abs_tol, spec.rel_tol, "q_integral");
}

}  // namespace

EvalResult q_integral(const EvalContext& ctx, HeatTime t, RiemannianArg delta, const QuadSpec& spec,
                      IntegralPath path) {
    spec.validate();
    if (t < kIntegralMinTime)
        throw RegimeError("q_integral: t below " + std::to_string(kIntegralMinTime), "q_exact");
    const int n = ctx.n;
    const double d = delta.delta;
    double c = factorial(n) * std::exp(-double(n) * n * t) / (std::pow(2.0 * kPi, n + 1) * std::sqrt(kPi * t));
    if (path == IntegralPath::Auto)
        path = (kPi * kPi + d * d) / (4.0 * t) <= 8.0 ? IntegralPath::RealLine : IntegralPath::Contour;
    if (path == IntegralPath::RealLine) return q_integral_real_line(n, t, d, spec, c);
    return q_integral_contour(n, t, d, spec, c);
}

}  // namespace crhyp
