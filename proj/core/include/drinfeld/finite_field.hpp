#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace drinfeld {

/// Base class of every error raised by the library.
class MathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input (malformed parameters, out-of-range indices, ...).
class InvalidInput : public MathError {
public:
    using MathError::MathError;
};

/// An internal consistency check failed; indicates a bug or a violated theorem.
class InconsistencyError : public MathError {
public:
    using MathError::MathError;
};

/// A truncated computation ran out of precision or iteration budget.
class PrecisionError : public MathError {
public:
    using MathError::MathError;
};

/// Parameters of F_q = F_p[x]/(modulus), q = p^r.
struct FqConfig {
    int p = 2;
    int r = 1;
    /// r+1 coefficients in F_p, ascending degree, monic. Ignored when r == 1.
    std::vector<int> modulus;
};

/// Element of F_q stored as the integer sum_k coords[k] * p^k.
struct FqElement {
    uint8_t v = 0;

    friend bool operator==(FqElement a, FqElement b) { return a.v == b.v; }
    friend bool operator!=(FqElement a, FqElement b) { return a.v != b.v; }
};

/// Table-driven arithmetic for a small finite field (q <= 256).
///
/// Elements are encoded as the base-p digit string of their power-basis
/// coordinates, so the encoding of an element of the prime field is its
/// residue.
class FiniteField {
public:
    explicit FiniteField(const FqConfig& cfg);

    static std::shared_ptr<const FiniteField> make(const FqConfig& cfg) {
        return std::make_shared<const FiniteField>(cfg);
    }

    int p() const { return p_; }
    int r() const { return r_; }
    int q() const { return q_; }
    const FqConfig& config() const { return cfg_; }

    uint8_t add(uint8_t a, uint8_t b) const { return add_[a * q_ + b]; }
    uint8_t sub(uint8_t a, uint8_t b) const { return add_[a * q_ + neg_[b]]; }
    uint8_t neg(uint8_t a) const { return neg_[a]; }
    uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a * q_ + b]; }
    uint8_t inv(uint8_t a) const {
        if (a == 0) throw MathError("F_q: division by zero");
        return inv_[a];
    }
    uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }
    uint8_t frobenius(uint8_t a) const { return frob_[a]; }
    uint8_t pow(uint8_t a, long long e) const;
    /// Embedding of an integer through the prime field.
    uint8_t from_int(long long k) const;

    /// Power-basis coordinates of an element (length r).
    std::vector<int> coords(uint8_t a) const;
    uint8_t from_coords(const std::vector<int>& coords) const;

    /// Canonical text: the residue for r == 1, "[d0,d1,...]" for r > 1.
    std::string to_string(uint8_t a) const;

    bool same_as(const FiniteField& other) const {
        return p_ == other.p_ && r_ == other.r_ && cfg_.modulus == other.cfg_.modulus;
    }

private:
    FqConfig cfg_;
    int p_, r_, q_;
    std::vector<uint8_t> add_, mul_, neg_, inv_, frob_;
};

/// Context-carrying F_q value, usable as a coefficient type of Poly / DenseMatrix.
class Fq {
public:
    Fq() = default;
    Fq(const FiniteField* F, uint8_t v) : F_(F), v_(v) {}

    const FiniteField* field() const { return F_; }
    uint8_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    Fq zero_like() const { return {F_, 0}; }
    Fq one_like() const { return {F_, 1}; }
    Fq inv() const { return {F_, F_->inv(v_)}; }
    Fq operator-() const { return {F_, F_->neg(v_)}; }
    friend Fq operator+(Fq a, Fq b) { return {a.F_, a.F_->add(a.v_, b.v_)}; }
    friend Fq operator-(Fq a, Fq b) { return {a.F_, a.F_->sub(a.v_, b.v_)}; }
    friend Fq operator*(Fq a, Fq b) { return {a.F_, a.F_->mul(a.v_, b.v_)}; }
    friend Fq operator/(Fq a, Fq b) { return {a.F_, a.F_->div(a.v_, b.v_)}; }
    friend bool operator==(Fq a, Fq b) { return a.v_ == b.v_; }
    friend bool operator!=(Fq a, Fq b) { return a.v_ != b.v_; }

private:
    const FiniteField* F_ = nullptr;
    uint8_t v_ = 0;
};

enum class FqOp { add, sub, mul, div, pow, frobenius };

/// Single entry point for element arithmetic; `b` is the exponent for pow and
/// is ignored for frobenius.
FqElement fq_arith(const FiniteField& F, FqElement a, FqElement b, FqOp op);

bool is_prime(long long n);

}  // namespace drinfeld
