#pragma once

#include "crhyp/types.hpp"

namespace crhyp {

struct PhiSolution {
    double phi = 0.0;
    double u = 1.0;
    double strip_bound = 0.0;  // arccos(1/cosh r)
    double residual = 0.0;
    double u_minus_1 = 0.0;
    double u_plus_1 = 2.0;
    bool continued = false;    // |phi| beyond strip_bound, u < 1
};

// Root of (phi - theta) = cosh r sin phi psi(cosh r cos phi) on
// |phi| < pi - arccos(1/cosh r).
PhiSolution phi_solve(double r, double theta);

// (phi - theta) - cosh r sin phi psi(u), evaluated directly from phi.
double saddle_equation(double r, double theta, double phi);

enum class DistanceRegime { Origin, Axis, General };

struct DistanceValue {
    double d2 = 0.0;
    double d = 0.0;
    DistanceRegime regime = DistanceRegime::Origin;
};

const char* regime_name(DistanceRegime r);

DistanceValue sr_distance(const EvalContext& ctx, CylPoint pt);

struct SaddleCurvature {
    double f2 = 0.0;
};

SaddleCurvature f_second_derivative(double r, double theta);

struct AsymptoticConstants {
    int n = 1;
    double A_n = 0.0;
    double B_n = 0.0;
};

AsymptoticConstants an_bn_constants(int n, const QuadSpec& spec = {});

EvalResult asym_diagonal(const EvalContext& ctx, HeatTime t);
EvalResult asym_vertical(const EvalContext& ctx, HeatTime t, double theta);
EvalResult asym_axis(const EvalContext& ctx, HeatTime t, double r);
EvalResult asym_general(const EvalContext& ctx, HeatTime t, CylPoint pt);

}  // namespace crhyp
