#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "crhyp/types.hpp"

namespace crhyp {

// Truncated Taylor series c_0 + c_1 h + ... + c_m h^m around a fixed point.
template <class T>
class Jet {
public:
    static constexpr int kCapacity = kMaxDimension + 4;

    Jet() = default;
    explicit Jet(int order, T value = T(0)) : m_(order) {
        if (order < 0 || order >= kCapacity) throw std::out_of_range("Jet order");
        c_.fill(T(0));
        c_[0] = value;
    }
    static Jet variable(int order, T x0) {
        Jet j(order, x0);
        if (order >= 1) j.c_[1] = T(1);
        return j;
    }

    int order() const { return m_; }
    T& operator[](int k) { return c_[k]; }
    const T& operator[](int k) const { return c_[k]; }
    T value() const { return c_[0]; }
    T derivative(int k) const {
        T f = c_[k];
        for (int i = 2; i <= k; ++i) f *= double(i);
        return f;
    }

    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= m_; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= m_; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(T s) {
        for (int k = 0; k <= m_; ++k) c_[k] *= s;
        return *this;
    }
    Jet& operator+=(T s) {
        c_[0] += s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, T s) { return a *= s; }
    friend Jet operator*(T s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, T s) { return a += s; }
    friend Jet operator-(const Jet& a) { return a * T(-1); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.m_);
        for (int k = 0; k <= a.m_; ++k) {
            T s(0);
            for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r(a.m_);
        for (int k = 0; k <= a.m_; ++k) {
            T s = a.c_[k];
            for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

    friend Jet exp(const Jet& a) {
        Jet r(a.m_);
        r.c_[0] = std::exp(a.c_[0]);
        for (int k = 1; k <= a.m_; ++k) {
            T s(0);
            for (int j = 1; j <= k; ++j) s += double(j) * a.c_[j] * r.c_[k - j];
            r.c_[k] = s / double(k);
        }
        return r;
    }

    friend Jet log(const Jet& a) {
        Jet r(a.m_);
        r.c_[0] = std::log(a.c_[0]);
        for (int k = 1; k <= a.m_; ++k) {
            T s = a.c_[k];
            for (int j = 1; j < k; ++j) s -= double(j) / double(k) * r.c_[j] * a.c_[k - j];
            r.c_[k] = s / a.c_[0];
        }
        return r;
    }

    // Returns {sinh a, cosh a}.
    friend std::array<Jet, 2> sinh_cosh(const Jet& a) {
        Jet s(a.m_), c(a.m_);
        s.c_[0] = std::sinh(a.c_[0]);
        c.c_[0] = std::cosh(a.c_[0]);
        for (int k = 1; k <= a.m_; ++k) {
            T ss(0), cc(0);
            for (int j = 1; j <= k; ++j) {
                ss += double(j) * a.c_[j] * c.c_[k - j];
                cc += double(j) * a.c_[j] * s.c_[k - j];
            }
            s.c_[k] = ss / double(k);
            c.c_[k] = cc / double(k);
        }
        return {s, c};
    }
    friend Jet sinh(const Jet& a) { return sinh_cosh(a)[0]; }
    friend Jet cosh(const Jet& a) { return sinh_cosh(a)[1]; }

    friend Jet pow(const Jet& a, double p) {
        Jet r(a.m_);
        r.c_[0] = std::pow(a.c_[0], p);
        for (int k = 1; k <= a.m_; ++k) {
            T s(0);
            for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a.c_[j] * r.c_[k - j];
            r.c_[k] = s / (double(k) * a.c_[0]);
        }
        return r;
    }

    // f(g(h)) where *this holds the Taylor coefficients of f at g(0).
    Jet compose(const Jet& g) const {
        Jet dg = g;
        dg.c_[0] = T(0);
        Jet r(g.m_, c_[m_]);
        for (int k = m_ - 1; k >= 0; --k) r = r * dg + c_[k];
        return r;
    }

private:
    int m_ = 0;
    std::array<T, kCapacity> c_{};
};

}  // namespace crhyp
