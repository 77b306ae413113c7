#pragma once

#include <vector>

#include "crhyp/types.hpp"

namespace crhyp {

// Horizontal integration line Im y = c for the cover kernel, with the
// reference exponent x0 (real part of the phase at a = 0) and truncation.
struct CoverContour {
    double c = 0.0;
    double x0 = 0.0;
    double y_max = 0.0;
    double tail = 0.0;  // |integrand| at y_max, scaled
    bool truncated = false;
    std::vector<double> breaks;
};

CoverContour cover_contour(int n, double t, double r, double theta, const QuadSpec& spec);

// 2 (4 pi t)^{-1/2} Re[e^{(y - i theta)^2/4t - x0} q_t(cosh r cosh y)], y = a + i c.
// The kernel is e^{x0} times the integral of this over a in [0, y_max].
double cover_integrand(int n, double t, double r, double theta, const CoverContour& cc, double a);

EvalResult p_cover(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec = {});

EvalResult p_cover_double(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec = {},
                          double* imag_residue = nullptr);

int default_k_max(double t, double theta, const QuadSpec& spec);

// Arguments |theta + 2 pi k|, |k| <= k_max, of the periodization terms whose
// exponent lies within exponent_cutoff (+10) of the leading term, sorted in
// decreasing order.
std::vector<double> periodization_arguments(int n, double t, double r, double theta, const QuadSpec& spec,
                                            const WrapSpec& wrap);

EvalResult p_compact(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec = {},
                     const WrapSpec& wrap = {});

// p_cover or p_compact according to ctx.space
EvalResult p_kernel(const EvalContext& ctx, HeatTime t, CylPoint pt, const QuadSpec& spec = {},
                    const WrapSpec& wrap = {});

}  // namespace crhyp
