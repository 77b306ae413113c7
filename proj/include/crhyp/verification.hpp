#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crhyp/types.hpp"

namespace crhyp {

struct FdSteps {
    double h_t = 1e-3;
    double h_r = 1e-3;
    double h_theta = 1e-3;

    FdSteps scaled(double f) const { return {h_t * f, h_r * f, h_theta * f}; }
};

struct ResidualReport {
    double t = 0, r = 0, theta = 0;
    double dt_estimate = 0.0;
    double Lp_estimate = 0.0;
    double rel_residual = 0.0;
    FdSteps steps;
};

// Central differences of the kernel against the radial sub-Laplacian
// d_rr + ((2n-1) coth r + tanh r) d_r + tanh^2 r d_thth. The stencil is
// applied to the integrand on a fixed contour, so quadrature error is shared
// by all stencil points.
ResidualReport pde_residual(const EvalContext& ctx, HeatTime t, CylPoint pt, FdSteps steps = {},
                            const QuadSpec& spec = {});

// Same stencil on an arbitrary function p(t, r, theta).
ResidualReport pde_residual_of(const std::function<double(double, double, double)>& p, int n, double t,
                               CylPoint pt, FdSteps steps = {});

EvalResult normalization_check(const EvalContext& ctx, HeatTime t, const QuadSpec& spec = {});

struct McConfig {
    std::size_t paths = 200000;
    double dt = 1e-3;
    std::uint64_t seed = 20240601;
    double r0 = 1e-3;
    double substep_threshold = 0.1;
    long max_substeps = 1000000;

    void validate(double t) const;
};

struct McSamples {
    std::vector<CylPoint> samples;
    std::size_t requested = 0;
    std::size_t aborted = 0;
};

// Counter-based per-path stream: SplitMix64 seeded from (seed, path).
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    SplitMix64(std::uint64_t seed, std::uint64_t stream);
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }
    result_type operator()();

private:
    std::uint64_t state_;
};

McSamples mc_simulate(const EvalContext& ctx, HeatTime t, const McConfig& cfg = {});

struct HistogramGrid {
    std::vector<double> r_edges;
    std::vector<double> theta_edges;
    std::vector<long> counts;     // row-major, r index outer
    std::vector<double> mu_mass;  // integral of d mu over each bin

    std::size_t nr() const { return r_edges.size() - 1; }
    std::size_t ntheta() const { return theta_edges.size() - 1; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * ntheta() + j; }
};

HistogramGrid make_grid(const EvalContext& ctx, std::vector<double> r_edges, std::vector<double> theta_edges);
HistogramGrid uniform_grid(const EvalContext& ctx, double r_max, std::size_t nr, double theta_max,
                           std::size_t ntheta);

struct McReport {
    HistogramGrid grid;
    std::vector<double> predicted;  // integral of p d mu per bin
    std::vector<double> z;          // binomial z-score per bin
    double predicted_total = 0.0;
    std::size_t used = 0;  // non-aborted samples, inside or outside the grid
    std::size_t outside = 0;
    std::size_t aborted = 0;
    std::size_t qualifying = 0;
    std::size_t within_3sigma = 0;
    double fraction_within = 0.0;
    double max_abs_z = 0.0;
};

McReport mc_compare(const McSamples& samples, const EvalContext& ctx, HeatTime t, HistogramGrid grid,
                    const QuadSpec& spec = {});

}  // namespace crhyp
