#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/finite_field.hpp"

namespace drinfeld {

/// Dense univariate polynomial over a FiniteField, coefficients ascending.
///
/// The zero polynomial is the empty coefficient vector.  The field pointer is
/// non-owning; owners (curves, contexts) keep the field alive.
class FqPoly {
public:
    FqPoly() = default;
    explicit FqPoly(const FiniteField* F) : F_(F) {}
    FqPoly(const FiniteField* F, std::vector<uint8_t> coeffs);

    static FqPoly constant(const FiniteField* F, uint8_t c);
    static FqPoly monomial(const FiniteField* F, uint8_t c, int degree);
    static FqPoly x(const FiniteField* F) { return monomial(F, 1, 1); }

    const FiniteField* field() const { return F_; }
    const std::vector<uint8_t>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    uint8_t lc() const { return c_.empty() ? 0 : c_.back(); }
    uint8_t coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0; }

    FqPoly operator-() const;
    FqPoly& operator+=(const FqPoly& o);
    FqPoly& operator-=(const FqPoly& o);
    friend FqPoly operator+(FqPoly a, const FqPoly& b) { return a += b; }
    friend FqPoly operator-(FqPoly a, const FqPoly& b) { return a -= b; }
    friend FqPoly operator*(const FqPoly& a, const FqPoly& b);
    FqPoly scaled(uint8_t c) const;
    FqPoly shifted(int k) const;  // multiply by x^k, k >= 0

    friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FqPoly& a, const FqPoly& b) { return !(a == b); }

    /// Euclidean division: returns (quotient, remainder).
    std::pair<FqPoly, FqPoly> divrem(const FqPoly& d) const;
    /// Exact division; throws InconsistencyError if the remainder is nonzero.
    FqPoly exact_div(const FqPoly& d) const;
    FqPoly monic() const;

    uint8_t eval(uint8_t x) const;
    /// p(x^k) for k >= 1.
    FqPoly spread(int k) const;
    /// The polynomial s with s(x^k) = p, if every exponent is divisible by k.
    std::optional<FqPoly> unspread(int k) const;
    /// Coefficient-wise Frobenius a -> a^p.
    FqPoly frobenius_coeffs(int times = 1) const;

    std::string to_string(const std::string& var) const;

private:
    void trim();
    const FiniteField* F_ = nullptr;
    std::vector<uint8_t> c_;
};

FqPoly gcd(FqPoly a, FqPoly b);

}  // namespace drinfeld
