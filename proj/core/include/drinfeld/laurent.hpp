#pragma once

#include <algorithm>
#include <climits>
#include <utility>
#include <vector>

#include "drinfeld/finite_field.hpp"

namespace drinfeld {

/// Truncated Laurent series sum_{k >= val} c_k x^k + O(x^prec) over a
/// coefficient type C (same requirements as Poly<C>).
///
/// Every stored coefficient is known: coeffs().size() == prec() - val().
/// Results of arithmetic carry the minimum precision their inputs justify.
/// Leading zero coefficients are not stripped automatically; `valuation()`
/// reports the first nonzero one.
template <class C>
class Laurent {
public:
    Laurent() = default;
    Laurent(C zero, int val, std::vector<C> coeffs)
        : zero_(std::move(zero)), val_(val), c_(std::move(coeffs)) {}

    /// The zero series known modulo x^prec.
    static Laurent zero_to(const C& zero, int prec) { return Laurent(zero, prec, {}); }
    /// A single term c x^k known modulo x^prec (prec > k).
    static Laurent monomial(const C& c, int k, int prec) {
        std::vector<C> v(std::max(0, prec - k), c.zero_like());
        if (!v.empty()) v[0] = c;
        return Laurent(c.zero_like(), k, std::move(v));
    }

    const C& zero() const { return zero_; }
    int val() const { return val_; }
    int prec() const { return val_ + static_cast<int>(c_.size()); }
    const std::vector<C>& coeffs() const { return c_; }
    /// Coefficient of x^k; k must be below prec().
    const C& coeff(int k) const {
        if (k >= prec()) throw PrecisionError("series coefficient beyond precision");
        if (k < val_) return zero_;
        return c_[k - val_];
    }
    /// Exponent of the first nonzero coefficient, or prec() if none is known.
    int valuation() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return val_ + static_cast<int>(i);
        return prec();
    }
    bool is_zero_to_precision() const { return valuation() == prec(); }

    /// Drop leading zeros so that val() equals valuation().
    Laurent stripped() const {
        const int v = valuation();
        return Laurent(zero_, v, std::vector<C>(c_.begin() + (v - val_), c_.end()));
    }
    /// Reduce the absolute precision to at most p.
    Laurent truncated(int p) const {
        if (p >= prec()) return *this;
        if (p <= val_) return zero_to(zero_, p);
        return Laurent(zero_, val_, std::vector<C>(c_.begin(), c_.begin() + (p - val_)));
    }

    Laurent operator-() const {
        Laurent r = *this;
        for (C& x : r.c_) x = -x;
        return r;
    }
    friend Laurent operator+(const Laurent& a, const Laurent& b) { return combine(a, b, false); }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return combine(a, b, true); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        const int rel = std::min(static_cast<int>(a.c_.size()), static_cast<int>(b.c_.size()));
        std::vector<C> out(rel, a.zero_);
        for (int i = 0; i < rel; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; i + j < rel; ++j) {
                if (b.c_[j].is_zero()) continue;
                out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
            }
        }
        // Precision: min(pa + vb, pb + va) = va + vb + rel.
        return Laurent(a.zero_, a.val_ + b.val_, std::move(out));
    }
    Laurent scaled(const C& s) const {
        Laurent r = *this;
        for (C& x : r.c_) x = x * s;
        return r;
    }
    Laurent shifted(int k) const { return Laurent(zero_, val_ + k, c_); }

    /// Multiplicative inverse; requires a known nonzero coefficient.
    Laurent inv() const {
        const Laurent s = stripped();
        if (s.c_.empty()) throw PrecisionError("series inverse: no known nonzero coefficient");
        const int rel = static_cast<int>(s.c_.size());
        const C inv0 = s.c_[0].inv();
        std::vector<C> out(rel, zero_);
        out[0] = inv0;
        for (int k = 1; k < rel; ++k) {
            C acc = zero_;
            for (int j = 1; j <= k; ++j) {
                if (s.c_[j].is_zero()) continue;
                acc = acc + s.c_[j] * out[k - j];
            }
            out[k] = -(acc * inv0);
        }
        return Laurent(zero_, -s.val_, std::move(out));
    }
    friend Laurent operator/(const Laurent& a, const Laurent& b) { return a * b.inv(); }

    template <class F>
    auto map(F&& fn) const -> Laurent<decltype(fn(std::declval<const C&>()))> {
        using D = decltype(fn(std::declval<const C&>()));
        std::vector<D> out;
        out.reserve(c_.size());
        for (const C& x : c_) out.push_back(fn(x));
        return Laurent<D>(fn(zero_), val_, std::move(out));
    }

    /// Equality of known coefficients over the common precision window.
    bool agrees_with(const Laurent& o, int upto) const {
        const int lo = std::min(val_, o.val_);
        for (int k = lo; k < upto; ++k)
            if (!(coeff(k) == o.coeff(k))) return false;
        return true;
    }

private:
    static Laurent combine(const Laurent& a, const Laurent& b, bool subtract) {
        const int v = std::min(a.val_, b.val_);
        const int p = std::min(a.prec(), b.prec());
        if (p <= v) return zero_to(a.zero_, p);
        std::vector<C> out(p - v, a.zero_);
        for (int k = std::max(v, a.val_); k < p; ++k) out[k - v] = a.c_[k - a.val_];
        for (int k = std::max(v, b.val_); k < p; ++k)
            out[k - v] = subtract ? out[k - v] - b.c_[k - b.val_] : out[k - v] + b.c_[k - b.val_];
        return Laurent(a.zero_, v, std::move(out));
    }

    C zero_{};
    int val_ = 0;
    std::vector<C> c_;
};

}  // namespace drinfeld
