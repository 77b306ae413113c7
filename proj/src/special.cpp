#include "crhyp/special.hpp"

#include <cmath>

namespace crhyp {

double acosh_safe(double x) {
    if (std::isnan(x) || x < 1.0 - 1e-12) throw DomainError("acosh_safe: argument below 1");
    if (x <= 1.0) return 0.0;
    double e = x - 1.0;
    if (e < 1.0) return std::log1p(e + std::sqrt(e * (2.0 + e)));
    return std::acosh(x);
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double measure_constant(int n) { return 2.0 * std::pow(kPi, n) / factorial(n - 1); }

double measure_density(const EvalContext& ctx, double r) {
    if (r < 0) throw DomainError("measure_density: r must be nonnegative");
    return measure_constant(ctx.n) * std::pow(std::sinh(r), 2 * ctx.n - 1) * std::cosh(r);
}

namespace {

// sum_m m!/(3/2)_m w^m
double hyp_series(double w) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 400; ++m) {
        term *= w * m / (m + 0.5);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double psi_real(double u, double um1, double up1) {
    if (!(up1 > 0)) throw DomainError("psi_real: u must exceed -1");
    if (std::abs(um1) < 0.5) return hyp_series(-0.5 * um1);
    if (u > 1.0) {
        double g = std::sqrt(um1 * up1);
        return std::log1p(um1 + g) / g;
    }
    double g = std::sqrt(-um1 * up1);
    return std::atan2(g, u) / g;
}

double psi_real(double u) { return psi_real(u, u - 1.0, u + 1.0); }

double psi_curvature_ratio(double u, double um1, double up1) {
    if (std::abs(um1) < 0.2) {
        double w = -0.5 * um1;
        // b_m - 2 b_{m-1}, b_m = m!/(3/2)_m
        double b_prev = 1.0, wp = 1.0, sum = 0.0;
        for (int m = 1; m < 400; ++m) {
            double b = b_prev * m / (m + 0.5);
            double term = (b - 2.0 * b_prev) * wp;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            b_prev = b;
            wp *= w;
        }
        return -sum / (4.0 * (1.0 - w));
    }
    return (u * psi_real(u, um1, up1) - 1.0) / (um1 * up1);
}

double s_bracket(double y) {
    double a = std::abs(y);
    if (a < 0.1) {
        double y2 = y * y;
        return -1.0 / 3.0 +
               y2 * (1.0 / 45.0 +
                     y2 * (-2.0 / 945.0 + y2 * (1.0 / 4725.0 + y2 * (-2.0 / 93555.0 + y2 * 1382.0 / 638512875.0))));
    }
    if (a > 40.0) return (1.0 - a) / (a * a);
    return (std::sinh(a) - a * std::cosh(a)) / (a * a * std::sinh(a));
}

double y_over_sinh(double y) {
    if (y == 0.0) return 1.0;
    return y / std::sinh(y);
}

}  // namespace crhyp
