#include "drinfeld/finite_field.hpp"

#include <sstream>

namespace drinfeld {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Multiply two coordinate vectors modulo the monic modulus over F_p.
std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& mod, int p) {
    const int r = static_cast<int>(mod.size()) - 1;
    std::vector<int> prod(2 * r - 1 > 0 ? 2 * r - 1 : 1, 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (int d = static_cast<int>(prod.size()) - 1; d >= r; --d) {
        int c = prod[d];
        if (c == 0) continue;
        for (int k = 0; k <= r; ++k)
            prod[d - r + k] = ((prod[d - r + k] - c * mod[k]) % p + p) % p;
    }
    prod.resize(r);
    return prod;
}

}  // namespace

FiniteField::FiniteField(const FqConfig& cfg) : cfg_(cfg), p_(cfg.p), r_(cfg.r) {
    if (!is_prime(p_)) throw InvalidInput("F_q: p = " + std::to_string(p_) + " is not prime");
    if (r_ < 1) throw InvalidInput("F_q: r must be positive");
    long long q = 1;
    for (int i = 0; i < r_; ++i) {
        q *= p_;
        if (q > 256) throw InvalidInput("F_q: q = p^r must not exceed 256");
    }
    q_ = static_cast<int>(q);
    if (r_ == 1) {
        cfg_.modulus = {0, 1};
    } else {
        if (static_cast<int>(cfg_.modulus.size()) != r_ + 1)
            throw InvalidInput("F_q: modulus must have r+1 coefficients");
        for (int& c : cfg_.modulus) {
            if (c < 0 || c >= p_) throw InvalidInput("F_q: modulus coefficient out of range");
        }
        if (cfg_.modulus.back() != 1) throw InvalidInput("F_q: modulus must be monic");
    }

    const int qq = q_;
    std::vector<std::vector<int>> co(qq);
    for (int a = 0; a < qq; ++a) co[a] = coords(static_cast<uint8_t>(a));

    add_.assign(qq * qq, 0);
    mul_.assign(qq * qq, 0);
    neg_.assign(qq, 0);
    inv_.assign(qq, 0);
    frob_.assign(qq, 0);
    for (int a = 0; a < qq; ++a) {
        std::vector<int> n(r_);
        for (int k = 0; k < r_; ++k) n[k] = (p_ - co[a][k]) % p_;
        neg_[a] = from_coords(n);
        for (int b = 0; b < qq; ++b) {
            std::vector<int> s(r_);
            for (int k = 0; k < r_; ++k) s[k] = (co[a][k] + co[b][k]) % p_;
            add_[a * qq + b] = from_coords(s);
            if (r_ == 1)
                mul_[a * qq + b] = static_cast<uint8_t>((a * b) % p_);
            else
                mul_[a * qq + b] = from_coords(poly_mulmod(co[a], co[b], cfg_.modulus, p_));
        }
    }
    // The quotient ring is a field exactly when every nonzero element is a unit.
    for (int a = 1; a < qq; ++a) {
        int found = -1;
        for (int b = 1; b < qq; ++b)
            if (mul_[a * qq + b] == 1) { found = b; break; }
        if (found < 0) throw InvalidInput("F_q: modulus is not irreducible over F_p");
        inv_[a] = static_cast<uint8_t>(found);
    }
    for (int a = 0; a < qq; ++a) {
        uint8_t x = 1;
        for (int k = 0; k < p_; ++k) x = mul(x, static_cast<uint8_t>(a));
        frob_[a] = x;
    }
}

uint8_t FiniteField::pow(uint8_t a, long long e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    uint8_t result = 1, base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint8_t FiniteField::from_int(long long k) const {
    long long m = ((k % p_) + p_) % p_;
    return static_cast<uint8_t>(m);
}

std::vector<int> FiniteField::coords(uint8_t a) const {
    std::vector<int> c(r_);
    int v = a;
    for (int k = 0; k < r_; ++k) {
        c[k] = v % p_;
        v /= p_;
    }
    return c;
}

uint8_t FiniteField::from_coords(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != r_) throw InvalidInput("F_q: wrong coordinate count");
    int v = 0;
    for (int k = r_ - 1; k >= 0; --k) {
        if (c[k] < 0 || c[k] >= p_) throw InvalidInput("F_q: coordinate out of range");
        v = v * p_ + c[k];
    }
    return static_cast<uint8_t>(v);
}

std::string FiniteField::to_string(uint8_t a) const {
    if (r_ == 1) return std::to_string(a);
    std::ostringstream os;
    auto c = coords(a);
    os << '[';
    for (int k = 0; k < r_; ++k) os << (k ? "," : "") << c[k];
    os << ']';
    return os.str();
}

FqElement fq_arith(const FiniteField& F, FqElement a, FqElement b, FqOp op) {
    switch (op) {
        case FqOp::add: return {F.add(a.v, b.v)};
        case FqOp::sub: return {F.sub(a.v, b.v)};
        case FqOp::mul: return {F.mul(a.v, b.v)};
        case FqOp::div: return {F.div(a.v, b.v)};
        case FqOp::pow: return {F.pow(a.v, b.v)};
        case FqOp::frobenius: return {F.frobenius(a.v)};
    }
    throw InvalidInput("fq_arith: unknown op");
}

}  // namespace drinfeld
