#include "drinfeld/analytic.hpp"

#include <algorithm>
#include <sstream>

namespace drinfeld {

namespace {

Laurent<Fq> fq_zero_series(const FiniteField* F, int prec) { return Laurent<Fq>::zero_to(Fq(F, 0), prec); }

int twist_factor(int q, int k) {
    long long Q = 1;
    for (int i = 0; i < k; ++i) {
        Q *= q;
        if (Q > (1LL << 24)) throw PrecisionError("series twist: q^k exceeds the supported exponent range");
    }
    return static_cast<int>(Q);
}

}  // namespace

void TruncationPolicy::validate() const {
    if (u_prec <= 0) throw InvalidInput("TruncationPolicy: u_prec must be positive");
    if (local_terms < 0) throw InvalidInput("TruncationPolicy: local_terms must be positive");
    if (product_cap <= 0) throw InvalidInput("TruncationPolicy: product_cap must be positive");
    if (exp_terms <= 0) throw InvalidInput("TruncationPolicy: exp_terms must be positive");
}

// ---------------------------------------------------------------------------
// InfSeries

InfSeries InfSeries::exact_zero(const FiniteField* F, int xi_num) {
    InfSeries r;
    r.F_ = F;
    r.exact_ = true;
    r.s_ = fq_zero_series(F, 0);
    r.xi_num_ = xi_num;
    return r;
}

InfSeries InfSeries::constant(const FiniteField* F, uint8_t c, int abs_prec, int xi_num) {
    if (abs_prec <= 0) throw InvalidInput("InfSeries::constant: precision must be positive");
    InfSeries r;
    r.F_ = F;
    std::vector<Fq> v(abs_prec, Fq(F, 0));
    v[0] = Fq(F, c);
    r.s_ = Laurent<Fq>(Fq(F, 0), 0, std::move(v));
    r.xi_num_ = xi_num;
    return r;
}

InfSeries InfSeries::from_series(Laurent<Fq> s, int xi_num) {
    InfSeries r;
    r.F_ = s.zero().field();
    if (!r.F_) throw InvalidInput("InfSeries: series without a field");
    r.s_ = std::move(s);
    r.xi_num_ = xi_num;
    return r;
}

int InfSeries::leading_exp() const { return exact_ ? INT_MAX : s_.valuation(); }

Fq InfSeries::coeff(int k) const {
    if (exact_) return Fq(F_, 0);
    return s_.coeff(k);
}

InfSeries InfSeries::operator-() const {
    InfSeries r = *this;
    if (!exact_) r.s_ = -s_;
    return r;
}

InfSeries InfSeries::add(const InfSeries& a, const InfSeries& b, bool subtract) {
    if (b.exact_) return a;
    if (a.exact_) return subtract ? -b : b;
    if (a.xi_num_ != b.xi_num_) throw InconsistencyError("InfSeries: adding series with different xi tags");
    InfSeries r = a;
    r.s_ = subtract ? a.s_ - b.s_ : a.s_ + b.s_;
    return r;
}

InfSeries operator*(const InfSeries& a, const InfSeries& b) {
    if (a.exact_ || b.exact_) return InfSeries::exact_zero(a.F_ ? a.F_ : b.F_, a.xi_num_ + b.xi_num_);
    InfSeries r = a;
    r.s_ = a.s_.stripped() * b.s_.stripped();
    r.xi_num_ = a.xi_num_ + b.xi_num_;
    return r;
}

InfSeries InfSeries::inv() const {
    if (exact_) throw MathError("InfSeries: inverse of zero");
    InfSeries r = *this;
    r.s_ = s_.inv();
    r.xi_num_ = -xi_num_;
    return r;
}

InfSeries InfSeries::pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    if (e == 0) {
        const int rel = exact_ ? 1 : std::max(1, rel_prec());
        return constant(F_, 1, rel);
    }
    InfSeries base = *this, acc;
    bool have = false;
    while (e > 0) {
        if (e & 1) {
            acc = have ? acc * base : base;
            have = true;
        }
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

InfSeries InfSeries::truncated(int p) const {
    if (exact_) return *this;
    InfSeries r = *this;
    r.s_ = s_.truncated(p);
    return r;
}

InfSeries InfSeries::with_rel_prec(int rel) const {
    if (exact_) return *this;
    return truncated(leading_exp() + rel);
}

InfSeries InfSeries::scaled(uint8_t c) const {
    if (exact_) return *this;
    if (c == 0) return exact_zero(F_, xi_num_);
    InfSeries r = *this;
    r.s_ = s_.scaled(Fq(F_, c));
    return r;
}

bool operator==(const InfSeries& a, const InfSeries& b) {
    if (a.exact_ && b.exact_) return true;
    if (a.exact_) return b.is_zero_to_precision();
    if (b.exact_) return a.is_zero_to_precision();
    if (a.xi_num_ != b.xi_num_) return false;
    const int lo = std::min(a.s_.val(), b.s_.val());
    const int hi = std::min(a.s_.prec(), b.s_.prec());
    for (int k = lo; k < hi; ++k)
        if (a.s_.coeff(k) != b.s_.coeff(k)) return false;
    return true;
}

int agreeing_coeffs(const InfSeries& a, const InfSeries& b, int reference_exp) {
    if (a.is_exact_zero() && b.is_exact_zero()) return INT_MAX;
    if (!a.is_exact_zero() && !b.is_exact_zero() && a.xi_num() != b.xi_num())
        throw InconsistencyError("agreeing_coeffs: different xi tags");
    const int hi = std::min(a.abs_prec(), b.abs_prec());
    const int lo = std::min(a.leading_exp(), b.leading_exp());
    for (int k = lo; k < hi; ++k)
        if (a.coeff(k) != b.coeff(k)) return std::max(0, k - reference_exp);
    return std::max(0, hi - reference_exp);
}

std::string to_string(const InfSeries& s) {
    const FiniteField& F = *s.field();
    std::ostringstream os;
    os << "xi^(" << s.xi_num() << "/" << (F.q() - 1) << ") * ";
    if (s.is_exact_zero()) {
        os << "0";
        return os.str();
    }
    const int e = s.leading_exp();
    const int rel = s.abs_prec() - e;
    os << "u^(" << e << ") * (";
    for (int k = 0; k < rel; ++k) {
        const Fq c = s.coeff(e + k);
        if (c.is_zero()) continue;
        os << F.to_string(c.value());
        if (k == 1) os << " u";
        else if (k > 1) os << " u^" << k;
        os << " + ";
    }
    os << "O(u^" << rel << "))";
    return os.str();
}

InfSeries embed(const BaseElement& x, int rel) {
    const FiniteField* F = x.curve()->field_ptr();
    if (x.is_zero()) return InfSeries::exact_zero(F);
    return InfSeries::from_series(expand_at_infinity(x, rel));
}

InfSeries embed(const BaseElement& x, const TruncationPolicy& policy) { return embed(x, policy.working_prec()); }

namespace {

InfSeries twist_capped(const InfSeries& s, int k, int rel_cap) {
    if (k == 0) return s.with_rel_prec(std::min(rel_cap, s.is_exact_zero() ? INT_MAX : s.rel_prec()));
    const int Q = twist_factor(s.field()->q(), k);
    if (s.is_exact_zero()) return InfSeries::exact_zero(s.field(), s.xi_num() * Q);
    const Laurent<Fq> st = s.series().stripped();
    const FiniteField* F = s.field();
    const long long full = static_cast<long long>(st.coeffs().size()) * Q;
    const int size = static_cast<int>(std::min<long long>(full, rel_cap));
    std::vector<Fq> out(size, Fq(F, 0));
    for (size_t i = 0; i < st.coeffs().size(); ++i) {
        const long long idx = static_cast<long long>(i) * Q;
        if (idx >= size) break;
        out[idx] = st.coeffs()[i];
    }
    return InfSeries::from_series(Laurent<Fq>(Fq(F, 0), st.val() * Q, std::move(out)), s.xi_num() * Q);
}

}  // namespace

InfSeries series_twist(const InfSeries& s, int k) {
    if (k < 0) throw InvalidInput("series_twist: negative twist");
    return twist_capped(s, k, INT_MAX);
}

InfSeries retag(const InfSeries& s, int new_tag, const InfSeries& xi) {
    const int qm1 = s.field()->q() - 1;
    const int diff = s.xi_num() - new_tag;
    if (diff % qm1 != 0) throw InconsistencyError("retag: xi tags differ by a non-integer power of xi");
    if (s.is_exact_zero()) return InfSeries::exact_zero(s.field(), new_tag);
    if (diff == 0) return s;
    const InfSeries r = s * xi.pow(diff / qm1);
    return InfSeries::from_series(r.series(), new_tag);
}

int norm_exponent(const InfSeries& s) { return s.is_exact_zero() ? INT_MIN : -s.leading_exp(); }

// ---------------------------------------------------------------------------
// Local expansions

namespace {

InfSeries inf_one(const FiniteField* F, int prec) { return InfSeries::constant(F, 1, prec); }

}  // namespace

LocalExpansion embed_expansion(const Laurent<BaseElement>& e, int rel) {
    const FiniteField* F = e.zero().curve()->field_ptr();
    return e.map([&](const BaseElement& x) { return x.is_zero() ? InfSeries::exact_zero(F) : embed(x, rel); });
}

LocalExpansion local_constant(const InfSeries& c, int terms) {
    std::vector<InfSeries> v(terms, c.zero_like());
    v[0] = c;
    return LocalExpansion(c.zero_like(), 0, std::move(v));
}

LocalExpansion retag(const LocalExpansion& e, int new_tag, const InfSeries& xi) {
    const LocalExpansion r = e.map([&](const InfSeries& x) { return retag(x, new_tag, xi); });
    return r;
}

bool expansions_agree(const LocalExpansion& a, const LocalExpansion& b, int rel) {
    const int lo = std::min(a.val(), b.val());
    const int hi = std::min(a.prec(), b.prec());
    if (hi <= lo) return false;
    // Coefficients that vanish on both sides are measured against the
    // leading exponent of the whole expansion.
    int global_ref = INT_MAX;
    for (int k = lo; k < hi; ++k) {
        for (const InfSeries* c : {&a.coeff(k), &b.coeff(k)})
            if (!c->is_zero_to_precision()) global_ref = std::min(global_ref, c->leading_exp());
    }
    for (int k = lo; k < hi; ++k) {
        const InfSeries& x = a.coeff(k);
        const InfSeries& y = b.coeff(k);
        if (x.is_exact_zero() && y.is_exact_zero()) continue;
        const InfSeries d = x - y;
        if (!d.is_zero_to_precision()) return false;
        const bool both_vanish = x.is_zero_to_precision() && y.is_zero_to_precision();
        const int ref = both_vanish ? global_ref : std::min(x.leading_exp(), y.leading_exp());
        if (ref == INT_MAX) continue;
        if (d.abs_prec() != INT_MAX && static_cast<long long>(d.abs_prec()) - ref < rel) return false;
    }
    return true;
}

InfinityData make_infinity_data(const ShtukaData& sh, const TruncationPolicy& policy, int local_terms) {
    policy.validate();
    if (local_terms <= 0) throw InvalidInput("make_infinity_data: local_terms must be positive");
    InfinityData d;
    d.sh = &sh;
    d.policy = policy;
    d.W = policy.working_prec();
    d.WL = policy.local_prec(local_terms);
    d.local_terms = local_terms;
    const CurvePtr& E = sh.curve;
    const FiniteField* F = E->field_ptr();
    d.theta = embed(BaseElement::theta(E), d.WL);
    d.eta = embed(BaseElement::eta(E), d.WL);
    d.xi = embed(sh.xi, d.WL);
    d.m = embed(sh.m, d.WL);
    d.alpha = embed(sh.alpha, d.WL);
    d.Y = embed_expansion(y_series_at(E, CurvePoint::xi(E), local_terms), d.WL);
    std::vector<InfSeries> tc(local_terms, InfSeries::exact_zero(F));
    tc[0] = d.theta;
    if (local_terms > 1) tc[1] = inf_one(F, d.WL);
    d.T = LocalExpansion(InfSeries::exact_zero(F), 0, std::move(tc));
    return d;
}

ProductResult pi_rho(const InfinityData& inf) {
    const ShtukaData& sh = *inf.sh;
    const CurvePtr& E = sh.curve;
    const FiniteField* F = E->field_ptr();
    const int q = F->q();
    const int W = inf.WL;
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const BaseElement c = sh.m * th - et;
    const InfSeries inv_alpha = embed(sh.alpha.inv(), W);
    const InfSeries A = embed(sh.m / c, W), B = embed(c.inv(), W);
    const InfSeries one = inf_one(F, W);
    InfSeries prod = one;
    ProductResult res;
    bool stable = false;
    for (int i = 1; i <= inf.policy.product_cap; ++i) {
        const InfSeries num = one - inf.theta * twist_capped(inv_alpha, i, W);
        const InfSeries den = one - twist_capped(A, i, W) * inf.theta + twist_capped(B, i, W) * inf.eta;
        const InfSeries factor = num / den;
        if ((factor - one).is_zero_to_precision() && (factor - one).abs_prec() >= W) {
            stable = true;
            break;
        }
        prod = prod * factor;
        res.factors = i;
    }
    if (!stable) throw PrecisionError("pi_rho: product did not stabilise within product_cap factors");
    const InfSeries pre = embed(th.pow(q) - sh.alpha, W);
    res.value = InfSeries::from_series((-(prod / pre)).series(), q);
    return res;
}

OmegaResult omega_product(const InfinityData& inf, int n, int start) {
    if (n < 1) throw InvalidInput("omega_product: n must be positive");
    if (start < 0) throw InvalidInput("omega_product: negative start");
    const ShtukaData& sh = *inf.sh;
    const CurvePtr& E = sh.curve;
    const FiniteField* F = E->field_ptr();
    const int q = F->q();
    const int L = inf.local_terms;
    const int W = inf.WL;
    OmegaResult res;
    LocalExpansion R;
    int i = start;
    if (start == 0) {
        // xi / f has a simple pole at Xi; expand it exactly.
        const CurveFunction xf = CurveFunction::constant(sh.xi) / sh.f;
        const LocalExpansion e = embed_expansion(expand_at_point(xf, CurvePoint::xi(E), L), W);
        R = e;
        for (int k = 1; k < n; ++k) R = R * e;
        i = 1;
        res.factors = 1;
    } else {
        R = local_constant(inf_one(F, W), L);
    }
    bool stable = false;
    const int last = i + inf.policy.product_cap;
    for (; i < last; ++i) {
        const InfSeries eta_i = twist_capped(inf.eta, i, W), th_i = twist_capped(inf.theta, i, W);
        const InfSeries m_i = twist_capped(inf.m, i, W), al_i = twist_capped(inf.alpha, i, W);
        const InfSeries xi_i = twist_capped(inf.xi, i, W);
        const LocalExpansion nu = inf.Y - local_constant(eta_i, L) - (inf.T - local_constant(th_i, L)).scaled(m_i);
        const LocalExpansion fi = nu / (inf.T - local_constant(al_i, L));
        const LocalExpansion g = fi.inv().scaled(xi_i);
        LocalExpansion factor = g;
        for (int k = 1; k < n; ++k) factor = factor * g;
        // Stop once a factor leaves every known coefficient unchanged.
        const LocalExpansion next = R * factor;
        bool same = next.prec() == R.prec();
        for (int k = std::min(next.val(), R.val()); k < next.prec() && same; ++k) same = next.coeff(k) == R.coeff(k);
        if (same) {
            stable = true;
            break;
        }
        R = next;
        ++res.factors;
    }
    if (!stable) throw PrecisionError("omega_product: product did not stabilise within product_cap factors");
    const int tag = n * (start == 0 ? 1 : twist_factor(q, start));
    res.value = R.map([tag](const InfSeries& x) {
        return x.is_exact_zero() ? InfSeries::exact_zero(x.field(), tag) : InfSeries::from_series(x.series(), tag);
    });
    return res;
}

LocalExpansion omega_at_Xi(const InfinityData& inf, int n) { return omega_product(inf, n, 0).value; }

InfSeries pi_rho_residue(const InfinityData& inf) { return -RES_Xi({omega_at_Xi(inf, 1)}, inf)[0]; }

std::vector<LocalExpansion> T_map(const LocalExpansion& w, const MotiveBasis& basis, const InfinityData& inf) {
    const CurvePtr& E = inf.sh->curve;
    std::vector<LocalExpansion> out;
    out.reserve(basis.n);
    for (int i = 0; i < basis.n; ++i) {
        const LocalExpansion g = embed_expansion(expand_at_point(basis.g[i], CurvePoint::xi(E), inf.local_terms), inf.WL);
        out.push_back(w * g);
    }
    return out;
}

LocalExpansion lambda_factor(const InfinityData& inf) {
    const CurvePtr& E = inf.sh->curve;
    const FiniteField& F = E->field();
    const CurveParams& p = E->params();
    const int L = inf.local_terms;
    LocalExpansion w = inf.Y.map([&](const InfSeries& x) { return x.scaled(F.from_int(2)); });
    w = w + inf.T.map([&](const InfSeries& x) { return x.scaled(p.c1.v); });
    if (p.c3.v != 0) w = w + local_constant(InfSeries::constant(&F, p.c3.v, inf.WL), L);
    return w.inv();
}

InfVector RES_Xi(const std::vector<LocalExpansion>& v, const InfinityData& inf) {
    const LocalExpansion lam = lambda_factor(inf);
    InfVector out;
    for (const LocalExpansion& x : v) {
        const LocalExpansion p = x * lam;
        if (p.prec() <= -1) throw PrecisionError("RES_Xi: expansion does not reach order -1");
        InfSeries r = p.coeff(-1);
        out.push_back(r);
    }
    return out;
}

PeriodResult period_vector(const AndersonModule& M, const MotiveBasis& basis, const InfinityData& inf) {
    const ShtukaData& sh = *inf.sh;
    const CurvePtr& E = sh.curve;
    const int n = M.n;
    const int q = E->q();
    PeriodResult r;
    const OmegaResult om = omega_product(inf, n, 0);
    r.omega_factors = om.factors;
    const InfVector res = RES_Xi(T_map(om.value, basis, inf), inf);
    for (const InfSeries& x : res) r.Pi.push_back(-x);
    const ProductResult pr = pi_rho(inf);
    r.pi = pr.value;
    r.pi_factors = pr.factors;
    const InfSeries raw = r.Pi[n - 1] / r.pi.pow(n);
    if (raw.xi_num() != n - n * q) throw InconsistencyError("period_vector: unexpected xi tag");
    r.ratio_xi_power = raw.xi_num() / (q - 1);
    r.ratio = retag(raw, 0, inf.xi);
    r.pi_residue = pi_rho_residue(inf);
    r.ratio_residue = r.Pi[n - 1] / r.pi_residue.pow(n);
    if (r.ratio_residue.xi_num() != 0) throw InconsistencyError("period_vector: unexpected xi tag");

    const CurvePoint Xi = CurvePoint::xi(E);
    BaseElement v = evaluate(basis.g[0], Xi);
    for (int i = 0; i + 1 < n; ++i) v = v / M.coeffs.a[i];
    r.theorem_value = v;
    const CurveParams& p = E->params();
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const BaseElement w = BaseElement::constant(E, E->field().from_int(2)) * et +
                          BaseElement::constant(E, p.c1.v) * th + BaseElement::constant(E, p.c3.v);
    BaseElement rv = v;
    for (int i = 0; i + 1 < n; ++i) rv = rv * w;
    if (n % 2 == 0) rv = -rv;
    r.residue_value = rv;
    const InfSeries tv = embed(r.theorem_value, inf.W), dv = embed(r.residue_value, inf.W);
    r.theorem_agree = agreeing_coeffs(r.ratio, tv, tv.leading_exp());
    r.theorem_agree_residue = agreeing_coeffs(r.ratio_residue, tv, tv.leading_exp());
    r.residue_agree = agreeing_coeffs(r.ratio_residue, dv, dv.leading_exp());
    return r;
}

// ---------------------------------------------------------------------------
// Exp and generating functions

InfMatrix embed(const KMatrix& m, int rel, const FiniteField* F) {
    InfMatrix out(m.rows(), m.cols(), InfSeries::exact_zero(F));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) out(i, j) = embed(m(i, j), rel);
    return out;
}

InfVector mat_vec(const InfMatrix& m, const InfVector& v) {
    if (static_cast<int>(v.size()) != m.cols()) throw InvalidInput("mat_vec: dimension mismatch");
    InfVector out;
    for (int i = 0; i < m.rows(); ++i) {
        InfSeries acc = m.zero();
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j).is_exact_zero() || v[j].is_exact_zero()) continue;
            acc = acc + m(i, j) * v[j];
        }
        out.push_back(acc);
    }
    return out;
}

InfVector twist(const InfVector& v, int k) {
    InfVector out;
    for (const InfSeries& x : v) out.push_back(series_twist(x, k));
    return out;
}

int norm_exponent(const InfVector& v) {
    int best = INT_MIN;
    for (const InfSeries& x : v) best = std::max(best, norm_exponent(x));
    return best;
}

namespace {

InfMatrix twist(const InfMatrix& m, int k, int rel) {
    InfMatrix out(m.rows(), m.cols(), m.zero());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = twist_capped(m(i, j), k, rel);
    return out;
}

InfVector twist_vec(const InfVector& v, int k, int rel) {
    InfVector out;
    for (const InfSeries& x : v) out.push_back(twist_capped(x, k, rel));
    return out;
}

int common_tag(const InfVector& v) {
    for (const InfSeries& x : v)
        if (!x.is_exact_zero()) return x.xi_num();
    return 0;
}

InfVector retag_vec(const InfVector& v, int tag, const InfSeries& xi) {
    InfVector out;
    for (const InfSeries& x : v) out.push_back(retag(x, tag, xi));
    return out;
}

InfVector add_vec(const InfVector& a, const InfVector& b) {
    InfVector out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

InfVector sub_vec(const InfVector& a, const InfVector& b) {
    InfVector out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

InfVector scale_vec(const InfVector& a, uint8_t c) {
    InfVector out;
    for (const InfSeries& x : a) out.push_back(x.scaled(c));
    return out;
}

/// ((lam) I + N)^-1 x = sum_{k<n} (-1)^k N^k x / lam^(k+1) for strictly upper triangular N.
InfVector neumann_apply(const InfMatrix& N, const InfSeries& lam, const InfVector& x) {
    const int n = N.rows();
    const InfSeries li = lam.inv();
    InfVector out(n, x[0].zero_like());
    InfVector cur = x;
    InfSeries scale = li;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const InfSeries term = cur[i].is_exact_zero() ? cur[i] : cur[i] * scale;
            out[i] = (k % 2 == 0) ? out[i] + term : out[i] - term;
        }
        cur = mat_vec(N, cur);
        scale = scale * li;
    }
    return out;
}

InfMatrix strict_part(const InfMatrix& D) {
    InfMatrix N = D;
    for (int i = 0; i < D.rows(); ++i) N(i, i) = D.zero();
    return N;
}

using LocalVector = std::vector<LocalExpansion>;

LocalVector mat_apply_local(const InfMatrix& m, const LocalVector& v) {
    LocalVector out;
    for (int i = 0; i < m.rows(); ++i) {
        LocalExpansion acc;
        bool have = false;
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j).is_exact_zero()) continue;
            const LocalExpansion term = v[j].scaled(m(i, j));
            acc = have ? acc + term : term;
            have = true;
        }
        if (!have) acc = v[0].scaled(m.zero());
        out.push_back(acc);
    }
    return out;
}

/// ((lam - t) I + N)^-1 applied to expansions at Xi; `inv_lmt` is 1/(lam - t).
LocalVector neumann_apply_local(const InfMatrix& N, const LocalExpansion& inv_lmt, const LocalVector& x) {
    const int n = N.rows();
    LocalVector out, cur = x;
    LocalExpansion scale = inv_lmt;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const LocalExpansion term = cur[i] * scale;
            if (k == 0) out.push_back(term);
            else out[i] = (k % 2 == 0) ? out[i] + term : out[i] - term;
        }
        if (k + 1 < n) {
            cur = mat_apply_local(N, cur);
            scale = scale * inv_lmt;
        }
    }
    return out;
}

}  // namespace

EmbeddedExp embed_exp(const AndersonModule& M, const ExpLogCoeffs& c, const InfinityData& inf) {
    const FiniteField* F = inf.sh->curve->field_ptr();
    EmbeddedExp X;
    for (const KMatrix& Q : c.Q) X.Q.push_back(embed(Q, inf.W, F));
    X.dtheta = embed(M.dtheta(), inf.WL, F);
    X.deta = embed(M.deta(), inf.WL, F);
    for (const KMatrix& A : M.rho_t.terms()) X.rho_t.push_back(embed(A, inf.WL, F));
    return X;
}

ExpEval exp_eval(const EmbeddedExp& X, const InfVector& z, int terms, const InfinityData& inf) {
    if (terms < 0 || terms >= static_cast<int>(X.Q.size()))
        throw InvalidInput("exp_eval: terms exceeds the computed Exp coefficients");
    const int tag = common_tag(z);
    ExpEval r;
    r.value = InfVector(z.size(), InfSeries::exact_zero(inf.sh->curve->field_ptr(), tag));
    std::vector<bool> known;
    for (int i = 0; i <= terms; ++i) {
        const InfVector term = retag_vec(mat_vec(X.Q[i], twist_vec(z, i, inf.W)), tag, inf.xi);
        r.value = add_vec(r.value, term);
        r.term_norms.push_back(norm_exponent(term));
        bool nonzero = false;
        for (const InfSeries& x : term) nonzero = nonzero || !x.is_zero_to_precision();
        known.push_back(nonzero);
    }
    r.last_term_norm = r.term_norms.back();
    r.increments_decreasing = terms >= 1;
    for (int i = 2; i <= terms; ++i)
        if (!known[i - 1] || !(r.term_norms[i] < r.term_norms[i - 1])) r.increments_decreasing = false;
    return r;
}

InfVector rho_t_apply(const EmbeddedExp& X, const InfVector& x, const InfinityData& inf) {
    const int tag = common_tag(x);
    InfVector out = mat_vec(X.rho_t[0], x);
    for (size_t k = 1; k < X.rho_t.size(); ++k)
        out = add_vec(out, retag_vec(mat_vec(X.rho_t[k], twist_vec(x, static_cast<int>(k), inf.W)), tag, inf.xi));
    return out;
}

FunctionalResidual exp_functional_residual(const EmbeddedExp& X, const InfVector& z, int terms,
                                           const InfinityData& inf) {
    if (terms < 0 || terms >= static_cast<int>(X.Q.size()))
        throw InvalidInput("exp_functional_residual: terms exceeds the computed Exp coefficients");
    const int tag = common_tag(z);
    const InfVector lhs = exp_eval(X, mat_vec(X.dtheta, z), terms, inf).value;
    const InfVector rhs = rho_t_apply(X, exp_eval(X, z, terms, inf).value, inf);
    FunctionalResidual r;
    r.residual_norm = norm_exponent(sub_vec(lhs, rhs));
    // Remainder: sum over k >= 1 of A_k (Q_i z^(i))^(k) with i <= terms < i + k.
    const int order = static_cast<int>(X.rho_t.size()) - 1;
    InfVector tail(z.size(), InfSeries::exact_zero(inf.sh->curve->field_ptr(), tag));
    for (int k = 1; k <= order; ++k)
        for (int i = std::max(0, terms - k + 1); i <= terms; ++i) {
            const InfVector term = retag_vec(mat_vec(X.Q[i], twist_vec(z, i, inf.W)), tag, inf.xi);
            tail = add_vec(tail, retag_vec(mat_vec(X.rho_t[k], twist_vec(term, k, inf.W)), tag, inf.xi));
        }
    r.tail_norm = norm_exponent(tail);
    return r;
}

GenFn anderson_gen_fn(const AndersonModule& M, const EmbeddedExp& X, const InfVector& u, int t_terms,
                      const InfinityData& inf) {
    const int n = M.n;
    if (static_cast<int>(u.size()) != n) throw InvalidInput("anderson_gen_fn: u has the wrong dimension");
    const int J = std::min(inf.policy.exp_terms, static_cast<int>(X.Q.size()) - 1);
    const CurvePtr& E = inf.sh->curve;
    const FiniteField* F = E->field_ptr();
    const CurveParams& p = E->params();
    const int L = inf.local_terms;
    const int W = inf.WL;
    const int tag = common_tag(u);
    const InfSeries zero = InfSeries::exact_zero(F, tag);
    const InfVector deta_u = mat_vec(X.deta, u);
    const int order = static_cast<int>(X.rho_t.size()) - 1;

    GenFn G;
    G.E_t.assign(t_terms, InfVector(n, zero));
    std::vector<InfVector> Eeta(t_terms, InfVector(n, zero));
    G.G_at_Xi.assign(n, LocalExpansion());
    std::vector<bool> have_local(n, false);

    const LocalExpansion ylin = inf.Y + inf.T.map([&](const InfSeries& x) { return x.scaled(p.c1.v); }) +
                                (p.c3.v != 0 ? local_constant(InfSeries::constant(F, p.c3.v, W), L)
                                           : local_constant(InfSeries::exact_zero(F), L));
    for (int j = 0; j <= J; ++j) {
        const InfMatrix Dj = twist(X.dtheta, j, W);
        const InfMatrix Nj = strict_part(Dj);
        const InfSeries th_j = Dj(0, 0);
        const InfVector uj = twist_vec(u, j, W), ej = twist_vec(deta_u, j, W);
        // t-series coefficients: Q_j (D_j)^-(i+1) x^(j).
        InfVector xu = uj, xe = ej;
        for (int i = 0; i < t_terms; ++i) {
            xu = neumann_apply(Nj, th_j, xu);
            xe = neumann_apply(Nj, th_j, xe);
            const InfVector tu = retag_vec(mat_vec(X.Q[j], xu), tag, inf.xi);
            const InfVector te = retag_vec(mat_vec(X.Q[j], xe), tag, inf.xi);
            G.E_t[i] = add_vec(G.E_t[i], tu);
            Eeta[i] = add_vec(Eeta[i], te);
            if (j == J) G.tail_norm = std::max({G.tail_norm, norm_exponent(tu), norm_exponent(te)});
            // rho_t maps the top terms to orders beyond J; D_t(G_u) is truncated by these images.
            for (int k = J - j + 1; k <= order; ++k)
                for (const InfVector* v : {&tu, &te}) {
                    const InfVector img = retag_vec(mat_vec(X.rho_t[k], twist_vec(*v, k, W)), tag, inf.xi);
                    G.tail_norm = std::max(G.tail_norm, norm_exponent(img));
                }
        }
        // Expansion at Xi of Q_j ((theta_j - t) I + N_j)^-1 (d[eta]^(j) + (y + c1 t + c3)) u^(j).
        LocalExpansion inv_lmt;
        if (j == 0) {
            // theta - t = -(t - theta) exactly.
            std::vector<InfSeries> c(L, InfSeries::exact_zero(F));
            c[0] = InfSeries::constant(F, F->neg(1), W);
            inv_lmt = LocalExpansion(InfSeries::exact_zero(F), 1, std::move(c)).inv();
        } else {
            inv_lmt = (local_constant(th_j, L) - inf.T).inv();
        }
        LocalVector w;
        for (int c = 0; c < n; ++c) {
            const InfSeries uc = retag(uj[c], tag, inf.xi), ec = retag(ej[c], tag, inf.xi);
            w.push_back(local_constant(ec, L) + ylin.scaled(uc));
        }
        const LocalVector contrib = mat_apply_local(X.Q[j], neumann_apply_local(Nj, inv_lmt, w));
        for (int c = 0; c < n; ++c) {
            G.G_at_Xi[c] = have_local[c] ? G.G_at_Xi[c] + contrib[c] : contrib[c];
            have_local[c] = true;
        }
    }
    G.G_b.assign(t_terms, InfVector(n, zero));
    G.G_c = G.E_t;
    for (int i = 0; i < t_terms; ++i) {
        G.G_b[i] = add_vec(Eeta[i], scale_vec(G.E_t[i], p.c3.v));
        if (i > 0) G.G_b[i] = add_vec(G.G_b[i], scale_vec(G.E_t[i - 1], p.c1.v));
    }
    return G;
}

int dt_gu_residual_norm(const AndersonModule& M, const EmbeddedExp& X, const GenFn& G, const InfVector& u,
                        const InfinityData& inf) {
    const CurveParams& p = inf.sh->curve->params();
    const int J = std::min(inf.policy.exp_terms, static_cast<int>(X.Q.size()) - 1);
    if (static_cast<int>(u.size()) != M.n) throw InvalidInput("dt_gu_residual_norm: u has the wrong dimension");
    const InfVector expu = exp_eval(X, u, J, inf).value;
    const InfVector expeu = exp_eval(X, mat_vec(X.deta, u), J, inf).value;
    auto rho_t = [&](const InfVector& x) { return rho_t_apply(X, x, inf); };
    const int t_terms = static_cast<int>(G.G_b.size());
    int worst = INT_MIN;
    for (int i = 0; i + 1 < t_terms; ++i) {
        InfVector rb = rho_t(G.G_b[i]), rc = rho_t(G.G_c[i]);
        if (i > 0) {
            rb = sub_vec(rb, G.G_b[i - 1]);
            rc = sub_vec(rc, G.G_c[i - 1]);
        }
        if (i == 0) {
            rb = sub_vec(sub_vec(rb, expeu), scale_vec(expu, p.c3.v));
            rc = sub_vec(rc, expu);
        }
        if (i == 1) rb = sub_vec(rb, scale_vec(expu, p.c1.v));
        worst = std::max({worst, norm_exponent(rb), norm_exponent(rc)});
    }
    return worst;
}

std::vector<std::vector<LocalExpansion>> coord_regular_matrix(const AndersonModule& M, const InfinityData& inf) {
    const int n = M.n;
    const FiniteField* F = inf.sh->curve->field_ptr();
    const int L = inf.local_terms;
    const int W = inf.WL;
    const EmbeddedExp X{{}, embed(M.dtheta(), W, F), embed(M.deta(), W, F), {}};
    const InfMatrix N = strict_part(X.dtheta);
    std::vector<InfSeries> c(L, InfSeries::exact_zero(F));
    c[0] = InfSeries::constant(F, F->neg(1), W);
    const LocalExpansion inv_lmt = LocalExpansion(InfSeries::exact_zero(F), 1, std::move(c)).inv();
    std::vector<std::vector<LocalExpansion>> out(n, std::vector<LocalExpansion>(n));
    for (int col = 0; col < n; ++col) {
        LocalVector e;
        for (int i = 0; i < n; ++i)
            e.push_back(local_constant(i == col ? InfSeries::constant(F, 1, W) : InfSeries::exact_zero(F), L));
        const LocalVector inv_col = neumann_apply_local(N, inv_lmt, e);
        // (d[eta] - y) applied to the column.
        LocalVector r = mat_apply_local(X.deta, inv_col);
        for (int i = 0; i < n; ++i) out[i][col] = r[i] - inf.Y * inv_col[i];
    }
    return out;
}

}  // namespace drinfeld
