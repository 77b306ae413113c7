#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <queue>
#include <vector>

#include "crhyp/types.hpp"

namespace crhyp {

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

struct GK15 {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
};

template <class T, class F>
Panel<T> gk15_panel(F& f, double a, double b, bool parallel = false) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, 15> x;
    std::array<T, 15> fx;
    x[7] = c;
    for (int j = 0; j < 7; ++j) {
        x[j] = c - h * GK15::xk[j];
        x[14 - j] = c + h * GK15::xk[j];
    }
    if (parallel) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < 15; ++i) {
            try {
                fx[i] = f(x[i]);
            } catch (...) {
#pragma omp critical(crhyp_gk15)
                failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int i = 0; i < 15; ++i) fx[i] = f(x[i]);
    }
    T fc = fx[7];
    T resk = fc * GK15::wk[7];
    T resg = fc * GK15::wg[3];
    for (int j = 0; j < 7; ++j) {
        T pair = fx[j] + fx[14 - j];
        resk += pair * GK15::wk[j];
        if (j % 2 == 1) resg += pair * GK15::wg[j / 2];
    }
    T mean = resk * 0.5;
    double resabs = magnitude(fc) * GK15::wk[7];
    double resasc = magnitude(fc - mean) * GK15::wk[7];
    for (int j = 0; j < 7; ++j) {
        resabs += (magnitude(fx[j]) + magnitude(fx[14 - j])) * GK15::wk[j];
        resasc += (magnitude(fx[j] - mean) + magnitude(fx[14 - j] - mean)) * GK15::wk[j];
    }
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = magnitude((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > 2.2250738585072014e-308 / (50.0 * 2.220446049250313e-16))
        err = std::max(err, 50.0 * 2.220446049250313e-16 * resabs);
    return {a, b, resk * h, err};
}

}  // namespace detail

template <class T>
struct QuadOutcome {
    T value{};
    double abs_err = 0.0;
    bool converged = false;
    int panels = 0;
};

// Adaptive Gauss-Kronrod (7/15) over the given breakpoints. The panel with
// the largest error estimate is bisected until the summed estimate drops to
// max(abs_tol, rel_tol |value|) or max_panels is reached. Panel sums are
// accumulated in breakpoint order so the result is deterministic.
template <class T, class F>
QuadOutcome<T> integrate_panels(F&& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                                int max_panels, bool parallel = false) {
    using P = detail::Panel<T>;
    auto cmp = [](const P& x, const P& y) { return x.err < y.err; };
    std::priority_queue<P, std::vector<P>, decltype(cmp)> heap(cmp);
    T total{};
    double err = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        P p = detail::gk15_panel<T>(f, breaks[i], breaks[i + 1], parallel);
        total += p.value;
        err += p.err;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    auto tol = [&] { return std::max(abs_tol, rel_tol * detail::magnitude(total)); };
    while (err > tol() && count < max_panels && !heap.empty()) {
        P worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        P left = detail::gk15_panel<T>(f, worst.a, mid, parallel);
        P right = detail::gk15_panel<T>(f, mid, worst.b, parallel);
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    std::vector<P> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const P& x, const P& y) { return x.a < y.a; });
    QuadOutcome<T> out;
    err = 0.0;
    for (const P& p : all) {
        out.value += p.value;
        err += p.err;
    }
    out.abs_err = err;
    out.converged = err <= std::max(abs_tol, rel_tol * detail::magnitude(out.value));
    out.panels = count;
    return out;
}

inline std::vector<double> uniform_breaks(double a, double b, int panels) {
    std::vector<double> v(panels + 1);
    for (int i = 0; i <= panels; ++i) v[i] = a + (b - a) * i / panels;
    v[panels] = b;
    return v;
}

// Converts an outcome to an EvalResult: sets Truncated when the tolerance
// was missed and throws when the miss exceeds a factor of ten.
EvalResult finalize(const QuadOutcome<double>& q, double abs_tol, double rel_tol, const char* what);

EvalResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec);

}  // namespace crhyp
