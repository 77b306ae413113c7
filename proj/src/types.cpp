#include "crhyp/types.hpp"

#include <cmath>

#include "crhyp/special.hpp"

namespace crhyp {

std::string flags_to_string(unsigned flags) {
    std::string s;
    auto add = [&](const char* name) {
        if (!s.empty()) s += '|';
        s += name;
    };
    if (flags & kTruncated) add("Truncated");
    if (flags & kOscillationResolved) add("OscillationResolved");
    if (flags & kImagResidueLarge) add("ImagResidueLarge");
    return s.empty() ? "none" : s;
}

double CylPoint::rho() const { return std::tanh(r); }

double canonical_theta(double theta) {
    if (theta >= -kPi && theta <= kPi) return theta;
    double c = std::remainder(theta, 2.0 * kPi);
    if (c < -kPi) c = kPi;
    return c;
}

void QuadSpec::validate() const {
    if (y_halfwidth < 0 || u_max < 0 || !(exponent_cutoff > 0) || !(abs_tol > 0) || !(rel_tol > 0))
        throw DomainError("quadrature settings must be positive");
    if (nodes_per_unit < 4) throw DomainError("nodes_per_unit must be >= 4");
    if (max_panels < 1) throw DomainError("max_panels must be >= 1");
}

double QuadSpec::tolerance(double value) const {
    return std::max(abs_tol, rel_tol * std::abs(value));
}

void WrapSpec::validate() const {
    if (k_max < 0) throw DomainError("k_max must be >= 1");
    if (!(tail_tol > 0)) throw DomainError("tail_tol must be positive");
}

}  // namespace crhyp
