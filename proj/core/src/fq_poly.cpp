#include "drinfeld/fq_poly.hpp"

#include <algorithm>
#include <sstream>

namespace drinfeld {

namespace {

constexpr int kKaratsubaCutoff = 40;

void school_mul(const int64_t* a, int na, const int64_t* b, int nb, int64_t* out) {
    for (int i = 0; i < na; ++i) {
        const int64_t ai = a[i];
        if (ai == 0) continue;
        for (int j = 0; j < nb; ++j) out[i + j] += ai * b[j];
    }
}

// out[0 .. 2n-1) += a*b for equal-length inputs.
void kara(const int64_t* a, const int64_t* b, int n, int64_t* out) {
    if (n <= kKaratsubaCutoff) {
        school_mul(a, n, b, n, out);
        return;
    }
    const int m = n / 2;
    const int h = n - m;
    std::vector<int64_t> z0(2 * m, 0), z2(2 * h, 0), z1(2 * h, 0), sa(h, 0), sb(h, 0);
    kara(a, b, m, z0.data());
    kara(a + m, b + m, h, z2.data());
    for (int i = 0; i < h; ++i) {
        sa[i] = a[m + i] + (i < m ? a[i] : 0);
        sb[i] = b[m + i] + (i < m ? b[i] : 0);
    }
    kara(sa.data(), sb.data(), h, z1.data());
    for (int i = 0; i < 2 * m; ++i) z1[i] -= z0[i];
    for (int i = 0; i < 2 * h; ++i) z1[i] -= z2[i];
    for (int i = 0; i < 2 * m; ++i) out[i] += z0[i];
    for (int i = 0; i < 2 * h; ++i) out[m + i] += z1[i];
    for (int i = 0; i < 2 * h; ++i) out[2 * m + i] += z2[i];
}

std::vector<uint8_t> mul_prime(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b, int p) {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    std::vector<int64_t> out(na + nb - 1, 0);
    if (std::min(na, nb) <= kKaratsubaCutoff) {
        // Accumulate in 32-bit words when it cannot overflow.
        std::vector<uint32_t> acc(na + nb - 1, 0);
        const long long bound = static_cast<long long>(std::min(na, nb)) * (p - 1) * (p - 1);
        if (bound < (1LL << 32)) {
            for (int i = 0; i < na; ++i) {
                const uint32_t ai = a[i];
                if (ai == 0) continue;
                uint32_t* row = acc.data() + i;
                for (int j = 0; j < nb; ++j) row[j] += ai * b[j];
            }
            std::vector<uint8_t> res(acc.size());
            for (size_t k = 0; k < acc.size(); ++k) res[k] = static_cast<uint8_t>(acc[k] % p);
            return res;
        }
    }
    std::vector<int64_t> ia(a.begin(), a.end()), ib(b.begin(), b.end());
    const int64_t* big = na >= nb ? ia.data() : ib.data();
    const int64_t* small = na >= nb ? ib.data() : ia.data();
    const int nbig = std::max(na, nb), nsmall = std::min(na, nb);
    if (nsmall <= kKaratsubaCutoff) {
        school_mul(big, nbig, small, nsmall, out.data());
    } else {
        std::vector<int64_t> chunk(nsmall), tmp(2 * nsmall);
        for (int off = 0; off < nbig; off += nsmall) {
            const int len = std::min(nsmall, nbig - off);
            std::fill(chunk.begin(), chunk.end(), 0);
            std::copy(big + off, big + off + len, chunk.begin());
            std::fill(tmp.begin(), tmp.end(), 0);
            kara(chunk.data(), small, nsmall, tmp.data());
            const int lim = std::min<int>(2 * nsmall - 1, static_cast<int>(out.size()) - off);
            for (int k = 0; k < lim; ++k) out[off + k] += tmp[k];
        }
    }
    std::vector<uint8_t> res(out.size());
    for (size_t k = 0; k < out.size(); ++k) {
        int64_t v = out[k] % p;
        if (v < 0) v += p;
        res[k] = static_cast<uint8_t>(v);
    }
    return res;
}

}  // namespace

FqPoly::FqPoly(const FiniteField* F, std::vector<uint8_t> coeffs) : F_(F), c_(std::move(coeffs)) {
    trim();
}

FqPoly FqPoly::constant(const FiniteField* F, uint8_t c) {
    FqPoly r(F);
    if (c) r.c_.push_back(c);
    return r;
}

FqPoly FqPoly::monomial(const FiniteField* F, uint8_t c, int degree) {
    FqPoly r(F);
    if (c) {
        r.c_.assign(degree + 1, 0);
        r.c_[degree] = c;
    }
    return r;
}

void FqPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FqPoly FqPoly::operator-() const {
    FqPoly r(F_);
    r.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = F_->neg(c_[i]);
    return r;
}

FqPoly& FqPoly::operator+=(const FqPoly& o) {
    if (o.c_.empty()) return *this;
    if (!F_) F_ = o.F_;
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->add(c_[i], o.c_[i]);
    trim();
    return *this;
}

FqPoly& FqPoly::operator-=(const FqPoly& o) {
    if (o.c_.empty()) return *this;
    if (!F_) F_ = o.F_;
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
    const FiniteField* F = a.F_ ? a.F_ : b.F_;
    FqPoly r(F);
    if (a.c_.empty() || b.c_.empty()) return r;
    if (a.c_.size() == 1) return b.scaled(a.c_[0]);
    if (b.c_.size() == 1) return a.scaled(b.c_[0]);
    if (F->r() == 1) {
        r.c_ = mul_prime(a.c_, b.c_, F->p());
    } else {
        r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (!a.c_[i]) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = F->add(r.c_[i + j], F->mul(a.c_[i], b.c_[j]));
        }
    }
    r.trim();
    return r;
}

FqPoly FqPoly::scaled(uint8_t c) const {
    FqPoly r(F_);
    if (c == 0 || c_.empty()) return r;
    r.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = F_->mul(c_[i], c);
    return r;
}

FqPoly FqPoly::shifted(int k) const {
    FqPoly r(F_);
    if (c_.empty()) return r;
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

std::pair<FqPoly, FqPoly> FqPoly::divrem(const FqPoly& d) const {
    if (d.is_zero()) throw MathError("polynomial division by zero");
    const FiniteField* F = F_ ? F_ : d.F_;
    if (degree() < d.degree()) return {FqPoly(F), *this};
    const int dd = d.degree();
    const uint8_t inv_lc = F->inv(d.lc());
    std::vector<uint8_t> rem = c_;
    std::vector<uint8_t> quo(degree() - dd + 1, 0);
    if (F->r() == 1) {
        const int p = F->p();
        std::vector<int> nd(dd + 1);
        for (int k = 0; k <= dd; ++k) nd[k] = (p - d.c_[k]) % p;
        for (int i = degree(); i >= dd; --i) {
            const int c = (rem[i] * inv_lc) % p;
            quo[i - dd] = static_cast<uint8_t>(c);
            if (!c) continue;
            const int base = i - dd;
            for (int k = 0; k < dd; ++k)
                rem[base + k] = static_cast<uint8_t>((rem[base + k] + c * nd[k]) % p);
            rem[i] = 0;
        }
    } else {
        for (int i = degree(); i >= dd; --i) {
            const uint8_t c = F->mul(rem[i], inv_lc);
            quo[i - dd] = c;
            if (!c) continue;
            for (int k = 0; k <= dd; ++k)
                rem[i - dd + k] = F->sub(rem[i - dd + k], F->mul(c, d.c_[k]));
        }
    }
    rem.resize(dd);
    return {FqPoly(F, std::move(quo)), FqPoly(F, std::move(rem))};
}

FqPoly FqPoly::exact_div(const FqPoly& d) const {
    if (d.is_one()) return *this;
    auto [q, r] = divrem(d);
    if (!r.is_zero()) throw InconsistencyError("inexact polynomial division");
    return q;
}

FqPoly FqPoly::monic() const {
    if (c_.empty() || c_.back() == 1) return *this;
    return scaled(F_->inv(c_.back()));
}

uint8_t FqPoly::eval(uint8_t x) const {
    uint8_t acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
    return acc;
}

FqPoly FqPoly::spread(int k) const {
    if (k == 1 || c_.size() <= 1) return *this;
    FqPoly r(F_);
    r.c_.assign((c_.size() - 1) * k + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i * k] = c_[i];
    return r;
}

std::optional<FqPoly> FqPoly::unspread(int k) const {
    if (k == 1 || c_.size() <= 1) return *this;
    FqPoly r(F_);
    r.c_.assign((c_.size() - 1) / k + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (i % k) return std::nullopt;
        r.c_[i / k] = c_[i];
    }
    return r;
}

FqPoly FqPoly::frobenius_coeffs(int times) const {
    FqPoly r = *this;
    if (F_ && F_->r() > 1) {
        for (auto& c : r.c_)
            for (int t = 0; t < times; ++t) c = F_->frobenius(c);
    }
    return r;
}

std::string FqPoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const uint8_t c = c_[i];
        if (!c) continue;
        if (!first) os << " + ";
        first = false;
        const std::string cs = F_->to_string(c);
        if (i == 0) {
            os << cs;
        } else {
            if (c != 1) os << cs << '*';
            os << var;
            if (i > 1) os << '^' << i;
        }
    }
    return os.str();
}

FqPoly gcd(FqPoly a, FqPoly b) {
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.degree() == 0) return FqPoly::constant(b.field(), 1);
        FqPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

}  // namespace drinfeld
