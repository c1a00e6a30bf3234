#pragma once

#include <utility>
#include <vector>

#include "drinfeld/finite_field.hpp"

namespace drinfeld {

/// Dense univariate polynomial over an exact field type C.
///
/// C must be a value type with +, -, *, unary -, `is_zero()`, `inv()`,
/// `zero_like()` and `one_like()` (the latter two return elements sharing the
/// receiver's context).  The polynomial keeps a zero prototype so that empty
/// polynomials still know their coefficient context.
template <class C>
class Poly {
public:
    Poly() = default;
    explicit Poly(C zero) : zero_(std::move(zero)) {}
    Poly(C zero, std::vector<C> coeffs) : zero_(std::move(zero)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const C& c) {
        Poly r(c.zero_like());
        if (!c.is_zero()) r.c_.push_back(c);
        return r;
    }
    static Poly monomial(const C& c, int degree) {
        Poly r(c.zero_like());
        if (!c.is_zero()) {
            r.c_.assign(degree + 1, c.zero_like());
            r.c_[degree] = c;
        }
        return r;
    }

    const C& zero() const { return zero_; }
    const std::vector<C>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const C& lc() const { return c_.empty() ? zero_ : c_.back(); }
    const C& coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : zero_;
    }
    bool is_one() const { return c_.size() == 1 && c_[0] == zero_.one_like(); }

    Poly operator-() const {
        Poly r(zero_);
        r.c_.reserve(c_.size());
        for (const C& x : c_) r.c_.push_back(-x);
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), zero_);
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), zero_);
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r(a.zero_);
        if (a.c_.empty() || b.c_.empty()) return r;
        std::vector<C> out(a.c_.size() + b.c_.size() - 1, a.zero_);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j].is_zero()) continue;
                out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
            }
        }
        r.c_ = std::move(out);
        r.trim();
        return r;
    }
    Poly scaled(const C& s) const {
        Poly r(zero_);
        if (s.is_zero()) return r;
        r.c_.reserve(c_.size());
        for (const C& x : c_) r.c_.push_back(x * s);
        r.trim();
        return r;
    }
    Poly shifted(int k) const {
        Poly r(zero_);
        if (c_.empty()) return r;
        r.c_.assign(k, zero_);
        r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::pair<Poly, Poly> divrem(const Poly& d) const {
        if (d.is_zero()) throw MathError("polynomial division by zero");
        if (degree() < d.degree()) return {Poly(zero_), *this};
        const int dd = d.degree();
        const C inv_lc = d.lc().inv();
        std::vector<C> rem = c_;
        std::vector<C> quo(degree() - dd + 1, zero_);
        for (int i = degree(); i >= dd; --i) {
            if (rem[i].is_zero()) continue;
            const C c = rem[i] * inv_lc;
            quo[i - dd] = c;
            for (int k = 0; k < dd; ++k) {
                if (d.c_[k].is_zero()) continue;
                rem[i - dd + k] = rem[i - dd + k] - c * d.c_[k];
            }
            rem[i] = zero_;
        }
        rem.resize(dd, zero_);
        return {Poly(zero_, std::move(quo)), Poly(zero_, std::move(rem))};
    }
    Poly exact_div(const Poly& d) const {
        if (d.is_one()) return *this;
        auto qr = divrem(d);
        if (!qr.second.is_zero()) throw InconsistencyError("inexact polynomial division");
        return qr.first;
    }
    Poly monic() const {
        if (c_.empty()) return *this;
        if (c_.back() == zero_.one_like()) return *this;
        return scaled(c_.back().inv());
    }

    C eval(const C& x) const {
        C acc = zero_;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    /// p(x + s), a Taylor shift.
    Poly taylor_shift(const C& s) const {
        std::vector<C> a = c_;
        const int n = static_cast<int>(a.size());
        for (int i = 0; i < n; ++i)
            for (int j = n - 2; j >= i; --j) a[j] = a[j] + s * a[j + 1];
        return Poly(zero_, std::move(a));
    }
    template <class F>
    Poly map(F&& fn) const {
        Poly r(fn(zero_));
        r.c_.reserve(c_.size());
        for (const C& x : c_) r.c_.push_back(fn(x));
        r.trim();
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    C zero_{};
    std::vector<C> c_;
};

template <class C>
Poly<C> gcd(Poly<C> a, Poly<C> b) {
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.degree() == 0) return Poly<C>::constant(b.zero().one_like());
        Poly<C> r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

}  // namespace drinfeld
