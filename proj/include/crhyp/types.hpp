#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crhyp {

enum class Space { CompactCircleBundle, UniversalCover };

constexpr int kMaxDimension = 20;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Raised when an evaluator is asked for a point outside its valid regime.
class RegimeError : public Error {
public:
    RegimeError(const std::string& what, std::string alternative)
        : Error(what + " (use " + alternative + ")"), alternative_(std::move(alternative)) {}
    const std::string& alternative() const { return alternative_; }

private:
    std::string alternative_;
};

enum Flag : unsigned {
    kNone = 0,
    kTruncated = 1u << 0,
    kOscillationResolved = 1u << 1,
    kImagResidueLarge = 1u << 2,
};

struct EvalResult {
    double value = 0.0;
    double abs_err = 0.0;
    unsigned flags = kNone;

    bool has(Flag f) const { return (flags & f) != 0; }
};

std::string flags_to_string(unsigned flags);

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, EvalResult best) : Error(what), best_(best) {}
    const EvalResult& best() const { return best_; }

private:
    EvalResult best_;
};

struct EvalContext {
    int n = 1;
    Space space = Space::UniversalCover;

    EvalContext() = default;
    EvalContext(int n_, Space s) : n(n_), space(s) {
        if (n < 1 || n > kMaxDimension)
            throw DomainError("n must lie in [1, " + std::to_string(kMaxDimension) + "]");
    }
};

class HeatTime {
public:
    explicit HeatTime(double t) : t_(t) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat time must be positive and finite");
    }
    double value() const { return t_; }
    operator double() const { return t_; }

private:
    double t_;
};

struct CylPoint {
    double r = 0.0;
    double theta = 0.0;

    CylPoint() = default;
    CylPoint(double r_, double theta_) : r(r_), theta(theta_) {
        if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(theta))
            throw DomainError("cylindrical point needs finite r >= 0 and finite theta");
    }
    double rho() const;
};

// theta mapped into [-pi, pi]; +pi is kept as +pi.
double canonical_theta(double theta);

struct QuadSpec {
    double y_halfwidth = 0.0;     // 0 selects max(20, 8 sqrt(t) * exponent_cutoff)
    double u_max = 0.0;           // 0 selects sqrt(pi^2 + 4 t * exponent_cutoff)
    int nodes_per_unit = 16;
    double exponent_cutoff = 50.0;
    double abs_tol = 1e-300;
    double rel_tol = 1e-10;
    int max_panels = 4000;

    void validate() const;
    double tolerance(double value) const;
};

struct WrapSpec {
    int k_max = 0;  // 0 selects the default from t and theta
    double tail_tol = 1e-14;

    void validate() const;
};

}  // namespace crhyp
