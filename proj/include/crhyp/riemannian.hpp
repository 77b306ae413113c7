#pragma once

#include <complex>

#include "crhyp/jet.hpp"
#include "crhyp/types.hpp"

namespace crhyp {

struct RiemannianArg {
    double delta = 0.0;

    RiemannianArg() = default;
    explicit RiemannianArg(double d) : delta(d) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("Riemannian distance must be finite and >= 0");
    }
};

// value = prefactor * exp(exponent)
template <class T>
struct ExpScaled {
    T prefactor{};
    T exponent{};
    T value() const { return prefactor * std::exp(exponent); }
};

// Taylor jet in z of psi(z) = acosh(z)/sqrt(z^2-1) at z0 = 1 - 2 w0.
template <class T>
Jet<T> psi_jet(T w0, int order);

// q_t as a function of z = cosh(delta), given w = (1 - z)/2 computed without
// cancellation by the caller. Complex w gives the analytic continuation.
ExpScaled<std::complex<double>> q_scaled(int n, double t, std::complex<double> w);
ExpScaled<double> q_scaled(int n, double t, double delta);

EvalResult q_exact(const EvalContext& ctx, HeatTime t, RiemannianArg delta);

enum class IntegralPath { Auto, RealLine, Contour };

EvalResult q_integral(const EvalContext& ctx, HeatTime t, RiemannianArg delta, const QuadSpec& spec = {},
                      IntegralPath path = IntegralPath::Auto);

EvalResult q_small_time(const EvalContext& ctx, HeatTime t, RiemannianArg delta);

constexpr double kIntegralMinTime = 0.05;

}  // namespace crhyp
