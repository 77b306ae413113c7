#pragma once

#include "crhyp/types.hpp"

namespace crhyp {

constexpr double kPi = 3.14159265358979323846;

double acosh_safe(double x);

// (2 pi^n / Gamma(n)) sinh^{2n-1}(r) cosh(r)
double measure_density(const EvalContext& ctx, double r);
double measure_constant(int n);

double factorial(int k);

// psi(u) = acosh(u)/sqrt(u^2-1), continued analytically to u in (-1, 1].
// um1 = u - 1 and up1 = u + 1 are passed separately so callers can supply
// cancellation-free values.
double psi_real(double u, double um1, double up1);
double psi_real(double u);

// (u psi(u) - 1)/(u^2 - 1), finite at u = 1 (value 1/3).
double psi_curvature_ratio(double u, double um1, double up1);

// S(y) = (sinh y - y cosh y)/(y^2 sinh y)
double s_bracket(double y);

// y / sinh y
double y_over_sinh(double y);

}  // namespace crhyp
