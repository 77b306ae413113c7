#include "crhyp/verification.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "crhyp/distance.hpp"
#include "crhyp/quadrature.hpp"
#include "crhyp/special.hpp"
#include "crhyp/subelliptic.hpp"

namespace crhyp {

namespace {

double radial_drift(int n, double r) { return (2.0 * n - 1.0) / std::tanh(r) + std::tanh(r); }

void check_stencil(double t, CylPoint pt, const FdSteps& s) {
    if (!(s.h_t > 0 && s.h_r > 0 && s.h_theta > 0)) throw DomainError("pde_residual: steps must be positive");
    if (pt.r < 5.0 * s.h_r) throw DomainError("pde_residual: need r >= 5 h_r");
    if (t < 2.0 * s.h_t) throw DomainError("pde_residual: need t >= 2 h_t");
}

// Stencil values of a function g(t, r, theta) combined into (d_t g, L g).
template <class G>
std::pair<double, double> stencil(G&& g, int n, double t, double r, double th, const FdSteps& s) {
    const double g0 = g(t, r, th);
    const double dt = (g(t + s.h_t, r, th) - g(t - s.h_t, r, th)) / (2.0 * s.h_t);
    const double rp = g(t, r + s.h_r, th), rm = g(t, r - s.h_r, th);
    const double tp = g(t, r, th + s.h_theta), tm = g(t, r, th - s.h_theta);
    const double gr = (rp - rm) / (2.0 * s.h_r);
    const double grr = (rp - 2.0 * g0 + rm) / (s.h_r * s.h_r);
    const double gtt = (tp - 2.0 * g0 + tm) / (s.h_theta * s.h_theta);
    const double th2 = std::tanh(r) * std::tanh(r);
    return {dt, grr + radial_drift(n, r) * gr + th2 * gtt};
}

ResidualReport make_report(double t, CylPoint pt, FdSteps steps, double dt, double lp) {
    ResidualReport rep;
    rep.t = t;
    rep.r = pt.r;
    rep.theta = pt.theta;
    rep.steps = steps;
    rep.dt_estimate = dt;
    rep.Lp_estimate = lp;
    rep.rel_residual = std::abs(dt - lp) / (std::abs(dt) + 1e-30);
    return rep;
}

// 5-point Gauss-Legendre on [-1, 1]
constexpr double kGlX[5] = {-0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
                            0.538469310105683091036314420700, 0.906179845938663992797626878299};
constexpr double kGlW[5] = {0.236926885056189087514264040720, 0.478628670499366468041291514836,
                            0.568888888888888888888888888889, 0.478628670499366468041291514836,
                            0.236926885056189087514264040720};

}  // namespace

ResidualReport pde_residual(const EvalContext& ctx, HeatTime t, CylPoint pt, FdSteps steps, const QuadSpec& spec) {
    check_stencil(t, pt, steps);
    spec.validate();
    const int n = ctx.n;
    std::vector<double> thetas;
    if (ctx.space == Space::CompactCircleBundle) {
        const double th = canonical_theta(pt.theta);
        const int K = default_k_max(t, th, spec);
        for (int k = -K; k <= K; ++k) thetas.push_back(th + 2.0 * kPi * k);
    } else {
        thetas.push_back(pt.theta);
    }
    double dt_sum = 0.0, lp_sum = 0.0;
    for (double th : thetas) {
        CoverContour cc = cover_contour(n, t, pt.r, th, spec);
        const double scale = std::exp(cc.x0);
        if (scale == 0.0) continue;
        auto g_at = [&](double a) {
            return [&, a](double tt, double rr, double tth) { return cover_integrand(n, tt, rr, tth, cc, a); };
        };
        auto base = integrate_panels<double>([&](double a) { return cover_integrand(n, t, pt.r, th, cc, a); },
                                             cc.breaks, 1e-300, 1e-12, spec.max_panels);
        const double atol = 1e-13 * std::abs(base.value);
        auto gd = integrate_panels<double>([&](double a) { return stencil(g_at(a), n, t, pt.r, th, steps).first; },
                                           cc.breaks, atol, 1e-12, spec.max_panels);
        auto gl = integrate_panels<double>([&](double a) { return stencil(g_at(a), n, t, pt.r, th, steps).second; },
                                           cc.breaks, atol, 1e-12, spec.max_panels);
        dt_sum += scale * gd.value;
        lp_sum += scale * gl.value;
    }
    return make_report(t, pt, steps, dt_sum, lp_sum);
}

ResidualReport pde_residual_of(const std::function<double(double, double, double)>& p, int n, double t,
                               CylPoint pt, FdSteps steps) {
    check_stencil(t, pt, steps);
    auto [dt, lp] = stencil(p, n, t, pt.r, pt.theta, steps);
    return make_report(t, pt, steps, dt, lp);
}

EvalResult normalization_check(const EvalContext& ctx, HeatTime t, const QuadSpec& spec) {
    spec.validate();
    const int n = ctx.n;
    const double c = spec.exponent_cutoff;
    const double rmax = 4.0 * n * t + std::sqrt(16.0 * n * n * t * t + 4.0 * t * (c + n * n * t));
    const double tol = std::max(spec.rel_tol, 1e-9);
    const bool compact = ctx.space == Space::CompactCircleBundle;
    const EvalContext cover(n, Space::UniversalCover);
    const double width = std::min(2.0, 2.0 * std::sqrt(double(t)));
    QuadSpec kspec = spec;
    kspec.rel_tol = std::min(spec.rel_tol, 0.1 * tol);

    auto theta_extent = [&](double r) {
        if (compact) return kPi;
        const double base = r * r;
        double th = 0.5;
        while (th < 500.0 && sr_distance(cover, CylPoint(r, th)).d2 - base <= 4.0 * t * (c + 10.0)) th *= 1.25;
        return th;
    };
    auto inner = [&](double r) {
        const double m = measure_density(ctx, r);
        if (m == 0.0) return 0.0;
        const double tmax = theta_extent(r);
        int panels = std::max(2, static_cast<int>(std::ceil(tmax / width)));
        auto q = integrate_panels<double>(
            [&](double th) { return p_kernel(ctx, t, CylPoint(r, th), kspec).value; },
            uniform_breaks(0.0, tmax, panels), 1e-300, tol, spec.max_panels);
        return 2.0 * m * q.value;
    };
    int panels = std::max(4, static_cast<int>(std::ceil(rmax / width)));
    auto q = integrate_panels<double>(inner, uniform_breaks(0.0, rmax, panels), 1e-300, tol, spec.max_panels,
                                      true);
    return finalize(q, 1e-300, tol, "normalization_check");
}

void McConfig::validate(double t) const {
    if (paths < 1000) throw DomainError("McConfig: paths must be >= 1000");
    if (!(dt > 0) || dt > t) throw DomainError("McConfig: need 0 < dt <= t");
    if (!(r0 > 0)) throw DomainError("McConfig: r0 must be positive");
    if (!(substep_threshold > 0)) throw DomainError("McConfig: substep_threshold must be positive");
}

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed;
    state_ = (*this)() ^ (stream * 0xD1B54A32D192ED03ull);
    (*this)();
}

SplitMix64::result_type SplitMix64::operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

McSamples mc_simulate(const EvalContext& ctx, HeatTime t, const McConfig& cfg) {
    cfg.validate(t);
    const int n = ctx.n;
    const long steps = static_cast<long>(std::ceil(t / cfg.dt - 1e-9));
    std::vector<CylPoint> out(cfg.paths);
    std::vector<char> ok(cfg.paths, 1);
    const long npaths = static_cast<long>(cfg.paths);

#pragma omp parallel for schedule(dynamic, 256)
    for (long p = 0; p < npaths; ++p) {
        SplitMix64 rng(cfg.seed, static_cast<std::uint64_t>(p));
        std::normal_distribution<double> normal(0.0, 1.0);
        double r = cfg.r0, th = 0.0;
        long sub = 0;
        for (long k = 0; k < steps && ok[p]; ++k) {
            double remaining = std::min(cfg.dt, t - k * cfg.dt);
            while (remaining > 1e-15 * cfg.dt) {
                double h = remaining;
                const double b = radial_drift(n, r);
                if (r < cfg.substep_threshold) h = std::min(h, 0.5 * r / b);
                const double s = std::sqrt(2.0 * h);
                const double z1 = normal(rng), z2 = normal(rng);
                th += s * std::tanh(r) * z2;
                r = std::max(std::abs(r + b * h + s * z1), 1e-12);
                remaining -= h;
                if (++sub > cfg.max_substeps) {
                    ok[p] = 0;
                    break;
                }
            }
        }
        if (ctx.space == Space::CompactCircleBundle) th = canonical_theta(th);
        out[p] = CylPoint(r, th);
    }
    McSamples res;
    res.requested = cfg.paths;
    res.samples.reserve(cfg.paths);
    for (std::size_t p = 0; p < cfg.paths; ++p) {
        if (ok[p])
            res.samples.push_back(out[p]);
        else
            ++res.aborted;
    }
    return res;
}

HistogramGrid make_grid(const EvalContext& ctx, std::vector<double> r_edges, std::vector<double> theta_edges) {
    if (r_edges.size() < 2 || theta_edges.size() < 2) throw DomainError("make_grid: need at least one bin");
    if (!std::is_sorted(r_edges.begin(), r_edges.end()) || !std::is_sorted(theta_edges.begin(), theta_edges.end()))
        throw DomainError("make_grid: edges must ascend");
    if (r_edges.front() < 0) throw DomainError("make_grid: r edges must be >= 0");
    HistogramGrid g;
    g.r_edges = std::move(r_edges);
    g.theta_edges = std::move(theta_edges);
    g.counts.assign(g.nr() * g.ntheta(), 0);
    g.mu_mass.assign(g.nr() * g.ntheta(), 0.0);
    const int n = ctx.n;
    auto radial = [&](double r) { return std::pow(std::sinh(r), 2 * n) / (2.0 * n); };
    for (std::size_t i = 0; i < g.nr(); ++i) {
        double mr = measure_constant(n) * (radial(g.r_edges[i + 1]) - radial(g.r_edges[i]));
        for (std::size_t j = 0; j < g.ntheta(); ++j)
            g.mu_mass[g.index(i, j)] = mr * (g.theta_edges[j + 1] - g.theta_edges[j]);
    }
    return g;
}

HistogramGrid uniform_grid(const EvalContext& ctx, double r_max, std::size_t nr, double theta_max,
                           std::size_t ntheta) {
    std::vector<double> re(nr + 1), te(ntheta + 1);
    for (std::size_t i = 0; i <= nr; ++i) re[i] = r_max * i / nr;
    for (std::size_t j = 0; j <= ntheta; ++j) te[j] = -theta_max + 2.0 * theta_max * j / ntheta;
    return make_grid(ctx, re, te);
}

McReport mc_compare(const McSamples& samples, const EvalContext& ctx, HeatTime t, HistogramGrid grid,
                    const QuadSpec& spec) {
    if (samples.samples.empty()) throw DomainError("mc_compare: empty sample list");
    McReport rep;
    rep.aborted = samples.aborted;
    rep.used = samples.samples.size();
    std::fill(grid.counts.begin(), grid.counts.end(), 0);
    for (const CylPoint& s : samples.samples) {
        auto ir = std::upper_bound(grid.r_edges.begin(), grid.r_edges.end(), s.r) - grid.r_edges.begin() - 1;
        auto it = std::upper_bound(grid.theta_edges.begin(), grid.theta_edges.end(), s.theta) -
                  grid.theta_edges.begin() - 1;
        if (ir < 0 || it < 0 || ir >= static_cast<long>(grid.nr()) || it >= static_cast<long>(grid.ntheta())) {
            ++rep.outside;
            continue;
        }
        ++grid.counts[grid.index(ir, it)];
    }

    const std::size_t nbins = grid.counts.size();
    rep.predicted.assign(nbins, 0.0);
    rep.z.assign(nbins, 0.0);
    std::exception_ptr failure;
    const long nb = static_cast<long>(nbins);
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < nb; ++b) {
        try {
            const std::size_t i = b / grid.ntheta(), j = b % grid.ntheta();
            const double r0 = grid.r_edges[i], r1 = grid.r_edges[i + 1];
            const double t0 = grid.theta_edges[j], t1 = grid.theta_edges[j + 1];
            double acc = 0.0;
            for (int a = 0; a < 5; ++a) {
                const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * kGlX[a];
                const double m = measure_density(ctx, r);
                double row = 0.0;
                for (int c = 0; c < 5; ++c) {
                    const double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * kGlX[c];
                    row += kGlW[c] * p_kernel(ctx, t, CylPoint(r, th), spec).value;
                }
                acc += kGlW[a] * m * row;
            }
            rep.predicted[b] = 0.25 * (r1 - r0) * (t1 - t0) * acc;
        } catch (...) {
#pragma omp critical(crhyp_mc_compare)
            failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    const double N = static_cast<double>(rep.used);
    for (std::size_t b = 0; b < nbins; ++b) {
        const double m = rep.predicted[b];
        rep.predicted_total += m;
        const double var = N * m * (1.0 - m);
        rep.z[b] = var > 0 ? (grid.counts[b] - N * m) / std::sqrt(var) : 0.0;
        if (N * m >= 20.0) {
            ++rep.qualifying;
            if (std::abs(rep.z[b]) <= 3.0) ++rep.within_3sigma;
            rep.max_abs_z = std::max(rep.max_abs_z, std::abs(rep.z[b]));
        }
    }
    if (rep.predicted_total < 0.999)
        throw DomainError("mc_compare: grid covers less than 99.9% of the predicted mass");
    rep.fraction_within = rep.qualifying ? double(rep.within_3sigma) / rep.qualifying : 0.0;
    rep.grid = std::move(grid);
    return rep;
}

}  // namespace crhyp
