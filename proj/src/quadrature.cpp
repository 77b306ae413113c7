#include "crhyp/quadrature.hpp"

#include <string>

namespace crhyp {

EvalResult finalize(const QuadOutcome<double>& q, double abs_tol, double rel_tol, const char* what) {
    EvalResult r{q.value, q.abs_err, kNone};
    double tol = std::max(abs_tol, rel_tol * std::abs(q.value));
    if (!std::isfinite(q.value)) throw ConvergenceError(std::string(what) + ": non-finite integral", r);
    if (!q.converged) {
        r.flags |= kTruncated;
        if (q.abs_err > 10.0 * tol)
            throw ConvergenceError(std::string(what) + ": tolerance not met within the panel budget", r);
    }
    return r;
}

EvalResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec) {
    spec.validate();
    if (!(a < b)) throw DomainError("integrate_adaptive: need a < b");
    int panels = std::max(1, static_cast<int>(std::ceil((b - a) * spec.nodes_per_unit / 15.0)));
    auto q = integrate_panels<double>(f, uniform_breaks(a, b, panels), spec.abs_tol, spec.rel_tol,
                                      std::max(spec.max_panels, panels));
    return finalize(q, spec.abs_tol, spec.rel_tol, "integrate_adaptive");
}

}  // namespace crhyp
