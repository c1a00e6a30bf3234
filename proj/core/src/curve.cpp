#include "drinfeld/curve.hpp"

#include <sstream>

#include "drinfeld/detail/quadratic.hpp"

namespace drinfeld {

using detail::quad_conj_num;
using detail::quad_mul_num;
using detail::quad_norm_num;
using detail::quad_normalize;

// ---------------------------------------------------------------------------
// Curve

Curve::Curve(std::shared_ptr<const FiniteField> F, const CurveParams& c) : F_(std::move(F)), params_(c) {
    const FiniteField& f = *F_;
    for (FqElement e : {c.c1, c.c2, c.c3, c.c4, c.c6})
        if (e.v >= f.q()) throw InvalidInput("curve coefficient outside F_q");
    const FiniteField* fp = F_.get();
    lin_ = FqPoly(fp, {c.c3.v, c.c1.v});
    cubic_ = FqPoly(fp, {c.c6.v, c.c4.v, c.c2.v, 1});

    auto k = [&](long long v) { return f.from_int(v); };
    auto m = [&](uint8_t a, uint8_t b) { return f.mul(a, b); };
    auto a = [&](uint8_t x, uint8_t y) { return f.add(x, y); };
    const uint8_t a1 = c.c1.v, a2 = c.c2.v, a3 = c.c3.v, a4 = c.c4.v, a6 = c.c6.v;
    const uint8_t b2 = a(m(a1, a1), m(k(4), a2));
    const uint8_t b4 = a(m(k(2), a4), m(a1, a3));
    const uint8_t b6 = a(m(a3, a3), m(k(4), a6));
    uint8_t b8 = a(m(m(a1, a1), a6), m(m(k(4), a2), a6));
    b8 = f.sub(b8, m(m(a1, a3), a4));
    b8 = a(b8, m(a2, m(a3, a3)));
    b8 = f.sub(b8, m(a4, a4));
    uint8_t d = f.neg(m(m(b2, b2), b8));
    d = f.sub(d, m(k(8), m(b4, m(b4, b4))));
    d = f.sub(d, m(k(27), m(b6, b6)));
    d = a(d, m(k(9), m(b2, m(b4, b6))));
    disc_ = d;
    if (disc_ == 0) throw InvalidInput("curve is singular (discriminant zero)");

    // eta^q in A by square-and-multiply, reducing eta^2 = cubic - lin * eta.
    FqPoly r0 = FqPoly::constant(fp, 1), r1(fp);
    FqPoly b0(fp), b1 = FqPoly::constant(fp, 1);
    long long e = f.q();
    while (e > 0) {
        if (e & 1) std::tie(r0, r1) = quad_mul_num(r0, r1, b0, b1, lin_, cubic_);
        e >>= 1;
        if (e) std::tie(b0, b1) = quad_mul_num(b0, b1, b0, b1, lin_, cubic_);
    }
    eta_q0_ = r0;
    eta_q1_ = r1;
}

bool Curve::on_curve_fq(uint8_t x, uint8_t y) const {
    const FiniteField& f = *F_;
    uint8_t lhs = f.add(f.mul(y, y), f.mul(lin_.eval(x), y));
    return lhs == cubic_.eval(x);
}

int Curve::count_fq_points() const {
    int count = 1;
    for (int x = 0; x < q(); ++x)
        for (int y = 0; y < q(); ++y)
            if (on_curve_fq(static_cast<uint8_t>(x), static_cast<uint8_t>(y))) ++count;
    return count;
}

bool Curve::same_as(const Curve& o) const {
    const CurveParams &a = params_, &b = o.params_;
    return F_->same_as(*o.F_) && a.c1 == b.c1 && a.c2 == b.c2 && a.c3 == b.c3 && a.c4 == b.c4 &&
           a.c6 == b.c6;
}

// ---------------------------------------------------------------------------
// BaseElement

BaseElement BaseElement::zero(const CurvePtr& E) {
    BaseElement x;
    x.E_ = E;
    x.n0_ = FqPoly(E->field_ptr());
    x.n1_ = FqPoly(E->field_ptr());
    x.den_ = FqPoly::constant(E->field_ptr(), 1);
    return x;
}

BaseElement BaseElement::constant(const CurvePtr& E, uint8_t c) {
    BaseElement x = zero(E);
    x.n0_ = FqPoly::constant(E->field_ptr(), c);
    return x;
}

BaseElement BaseElement::theta(const CurvePtr& E) {
    BaseElement x = zero(E);
    x.n0_ = FqPoly::x(E->field_ptr());
    return x;
}

BaseElement BaseElement::eta(const CurvePtr& E) {
    BaseElement x = zero(E);
    x.n1_ = FqPoly::constant(E->field_ptr(), 1);
    return x;
}

BaseElement BaseElement::from_parts(const CurvePtr& E, FqPoly n0, FqPoly n1, FqPoly den) {
    BaseElement x;
    x.E_ = E;
    const FiniteField* F = E->field_ptr();
    x.n0_ = n0.field() ? std::move(n0) : FqPoly(F);
    x.n1_ = n1.field() ? std::move(n1) : FqPoly(F);
    x.den_ = den.field() ? std::move(den) : FqPoly(F);
    quad_normalize(x.n0_, x.n1_, x.den_);
    return x;
}

BaseElement BaseElement::from_integral(const CurvePtr& E, FqPoly n0, FqPoly n1) {
    return from_parts(E, std::move(n0), std::move(n1), FqPoly::constant(E->field_ptr(), 1));
}

std::optional<uint8_t> BaseElement::as_constant() const {
    if (!n1_.is_zero() || !den_.is_one() || n0_.degree() > 0) return std::nullopt;
    return n0_.coeff(0);
}

BaseElement BaseElement::operator-() const {
    BaseElement r = *this;
    r.n0_ = -n0_;
    r.n1_ = -n1_;
    return r;
}

BaseElement BaseElement::add(const BaseElement& a, const BaseElement& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    BaseElement r;
    r.E_ = a.E_;
    if (a.den_ == b.den_) {
        r.n0_ = subtract ? a.n0_ - b.n0_ : a.n0_ + b.n0_;
        r.n1_ = subtract ? a.n1_ - b.n1_ : a.n1_ + b.n1_;
        r.den_ = a.den_;
    } else {
        const FqPoly g = gcd(a.den_, b.den_);
        const FqPoly fa = b.den_.exact_div(g);  // multiplies a
        const FqPoly fb = a.den_.exact_div(g);  // multiplies b
        const FqPoly x0 = b.n0_ * fb, x1 = b.n1_ * fb;
        r.n0_ = subtract ? a.n0_ * fa - x0 : a.n0_ * fa + x0;
        r.n1_ = subtract ? a.n1_ * fa - x1 : a.n1_ * fa + x1;
        r.den_ = a.den_ * fa;
    }
    quad_normalize(r.n0_, r.n1_, r.den_);
    return r;
}

BaseElement operator*(const BaseElement& a, const BaseElement& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (auto c = b.as_constant()) return a.scaled(*c);
    if (auto c = a.as_constant()) return b.scaled(*c);
    BaseElement r;
    r.E_ = a.E_;
    std::tie(r.n0_, r.n1_) = quad_mul_num(a.n0_, a.n1_, b.n0_, b.n1_, a.E_->lin(), a.E_->cubic());
    r.den_ = a.den_ * b.den_;
    quad_normalize(r.n0_, r.n1_, r.den_);
    return r;
}

BaseElement BaseElement::scaled(uint8_t c) const {
    if (c == 0) return zero(E_);
    BaseElement r = *this;
    r.n0_ = n0_.scaled(c);
    r.n1_ = n1_.scaled(c);
    return r;
}

BaseElement BaseElement::inv() const {
    if (is_zero()) throw MathError("K: division by zero");
    const Curve& E = *E_;
    auto [c0, c1] = quad_conj_num(n0_, n1_, E.lin());
    BaseElement r;
    r.E_ = E_;
    r.n0_ = c0 * den_;
    r.n1_ = c1 * den_;
    r.den_ = quad_norm_num(n0_, n1_, E.lin(), E.cubic());
    quad_normalize(r.n0_, r.n1_, r.den_);
    return r;
}

BaseElement BaseElement::pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    BaseElement result = one(E_), base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

BaseElement BaseElement::twist_once() const {
    const int q = E_->q();
    const FqPoly s0 = n0_.spread(q), s1 = n1_.spread(q);
    BaseElement r;
    r.E_ = E_;
    r.n0_ = s0 + s1 * E_->eta_q0();
    r.n1_ = s1 * E_->eta_q1();
    r.den_ = den_.spread(q);
    quad_normalize(r.n0_, r.n1_, r.den_);
    return r;
}

BaseElement BaseElement::untwist_once() const {
    // With x = N/d, z = x^(1/q) * d lies in A and z^q = N d^(q-1).
    const int q = E_->q();
    FqPoly dpow = FqPoly::constant(E_->field_ptr(), 1);
    for (int i = 0; i < q - 1; ++i) dpow = dpow * den_;
    const FqPoly P0 = n0_ * dpow, P1 = n1_ * dpow;
    auto [s1, rem] = P1.divrem(E_->eta_q1());
    if (!rem.is_zero()) throw InconsistencyError("inexact negative twist");
    const FqPoly s0 = P0 - s1 * E_->eta_q0();
    auto m0 = s0.unspread(q), m1 = s1.unspread(q);
    if (!m0 || !m1) throw InconsistencyError("inexact negative twist");
    return from_parts(E_, *m0, *m1, den_);
}

BaseElement BaseElement::twist(int k) const {
    if (k == 0 || is_zero() || (n1_.is_zero() && n0_.degree() <= 0 && den_.is_one())) return *this;
    BaseElement r = *this;
    for (int i = 0; i < k; ++i) r = r.twist_once();
    for (int i = 0; i < -k; ++i) r = r.untwist_once();
    return r;
}

BaseElement BaseElement::conj() const {
    auto [c0, c1] = quad_conj_num(n0_, n1_, E_->lin());
    return from_parts(E_, c0, c1, den_);
}

std::pair<int, uint8_t> BaseElement::deg_sgn() const {
    if (is_zero()) throw MathError("deg_sgn of zero");
    const int d0 = n0_.is_zero() ? -1000000000 : 2 * n0_.degree();
    const int d1 = n1_.is_zero() ? -1000000000 : 2 * n1_.degree() + 3;
    const int dd = 2 * den_.degree();
    if (d0 > d1) return {d0 - dd, n0_.lc()};
    return {d1 - dd, n1_.lc()};
}

std::string BaseElement::to_string() const {
    return "(" + n0_.to_string("theta") + " ; " + n1_.to_string("theta") + ") / " +
           den_.to_string("theta");
}

// ---------------------------------------------------------------------------
// Points and the group law

CurvePoint CurvePoint::xi(const CurvePtr& E) {
    return affine(BaseElement::theta(E), BaseElement::eta(E));
}

CurvePoint CurvePoint::twist(int k) const {
    if (is_infinity) return *this;
    return affine(x.twist(k), y.twist(k));
}

std::string CurvePoint::to_string() const {
    if (is_infinity) return "inf";
    return "[" + x.to_string() + " , " + y.to_string() + "]";
}

namespace {

BaseElement lin_at(const CurvePtr& E, const BaseElement& x) {
    const CurveParams& c = E->params();
    return x.scaled(c.c1.v) + BaseElement::constant(E, c.c3.v);
}

BaseElement cubic_at(const CurvePtr& E, const BaseElement& x) {
    const CurveParams& c = E->params();
    BaseElement acc = x + BaseElement::constant(E, c.c2.v);
    acc = acc * x + BaseElement::constant(E, c.c4.v);
    return acc * x + BaseElement::constant(E, c.c6.v);
}

}  // namespace

bool on_curve(const CurvePtr& E, const CurvePoint& P) {
    if (P.is_infinity) return true;
    return P.y * P.y + lin_at(E, P.x) * P.y == cubic_at(E, P.x);
}

CurvePoint point_neg(const CurvePtr& E, const CurvePoint& P) {
    if (P.is_infinity) return P;
    return CurvePoint::affine(P.x, -P.y - lin_at(E, P.x));
}

namespace {

// Slope of the chord (or tangent) through P and Q; nullopt for a vertical line.
std::optional<BaseElement> slope(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q) {
    const FiniteField& F = E->field();
    const CurveParams& c = E->params();
    if (P.x == Q.x) {
        const BaseElement ysum = P.y + Q.y + lin_at(E, Q.x);
        if (ysum.is_zero()) return std::nullopt;
        // Tangent: (3x^2 + 2 c2 x + c4 - c1 y) / (2y + c1 x + c3).
        const BaseElement num = (P.x * P.x).scaled(F.from_int(3)) + P.x.scaled(F.mul(F.from_int(2), c.c2.v)) +
                                BaseElement::constant(E, c.c4.v) - P.y.scaled(c.c1.v);
        const BaseElement den = P.y.scaled(F.from_int(2)) + lin_at(E, P.x);
        return num / den;
    }
    return (Q.y - P.y) / (Q.x - P.x);
}

}  // namespace

CurvePoint point_add(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q) {
    if (P.is_infinity) return Q;
    if (Q.is_infinity) return P;
    const auto lam = slope(E, P, Q);
    if (!lam) return CurvePoint::infinity();
    const CurveParams& c = E->params();
    const BaseElement x3 = (*lam) * (*lam) + lam->scaled(c.c1.v) - BaseElement::constant(E, c.c2.v) - P.x - Q.x;
    // The third intersection has y = y_P + lam (x3 - x_P); negate it.
    const BaseElement y_third = P.y + (*lam) * (x3 - P.x);
    return point_neg(E, CurvePoint::affine(x3, y_third));
}

CurvePoint point_sub(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q) {
    return point_add(E, P, point_neg(E, Q));
}

CurvePoint point_mul(const CurvePtr& E, long long k, const CurvePoint& P) {
    if (k < 0) return point_mul(E, -k, point_neg(E, P));
    CurvePoint result = CurvePoint::infinity(), base = P;
    while (k > 0) {
        if (k & 1) result = point_add(E, result, base);
        k >>= 1;
        if (k) base = point_add(E, base, base);
    }
    return result;
}

CurvePoint point_op(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q, PointOp op, long long k) {
    switch (op) {
        case PointOp::add: return point_add(E, P, Q);
        case PointOp::neg: return point_neg(E, P);
        case PointOp::sub: return point_sub(E, P, Q);
        case PointOp::scalar: return point_mul(E, k, P);
    }
    throw InvalidInput("point_op: unknown op");
}

// ---------------------------------------------------------------------------
// CurveFunction

namespace {

KPoly kpoly_zero(const CurvePtr& E) { return KPoly(BaseElement::zero(E)); }
KPoly kpoly_one(const CurvePtr& E) { return KPoly::constant(BaseElement::one(E)); }

KPoly lift_fq_poly(const CurvePtr& E, const FqPoly& p) {
    std::vector<BaseElement> c;
    for (uint8_t v : p.coeffs()) c.push_back(BaseElement::constant(E, v));
    return KPoly(BaseElement::zero(E), std::move(c));
}

struct CurvePolys {
    KPoly lin, cubic;
};

CurvePolys curve_polys(const CurvePtr& E) { return {lift_fq_poly(E, E->lin()), lift_fq_poly(E, E->cubic())}; }

}  // namespace

CurveFunction CurveFunction::constant(const BaseElement& c) {
    CurveFunction g;
    g.E_ = c.curve();
    g.A0_ = KPoly::constant(c);
    g.A1_ = kpoly_zero(g.E_);
    g.B_ = kpoly_one(g.E_);
    return g;
}

CurveFunction CurveFunction::t(const CurvePtr& E) {
    CurveFunction g = constant(BaseElement::zero(E));
    g.A0_ = KPoly::monomial(BaseElement::one(E), 1);
    return g;
}

CurveFunction CurveFunction::y(const CurvePtr& E) {
    CurveFunction g = constant(BaseElement::zero(E));
    g.A1_ = kpoly_one(E);
    return g;
}

CurveFunction CurveFunction::from_parts(const CurvePtr& E, KPoly A0, KPoly A1, KPoly B) {
    CurveFunction g;
    g.E_ = E;
    g.A0_ = std::move(A0);
    g.A1_ = std::move(A1);
    g.B_ = std::move(B);
    quad_normalize(g.A0_, g.A1_, g.B_);
    return g;
}

std::optional<BaseElement> CurveFunction::as_constant() const {
    if (!A1_.is_zero() || A0_.degree() > 0 || B_.degree() > 0) return std::nullopt;
    return A0_.coeff(0);
}

CurveFunction CurveFunction::operator-() const {
    CurveFunction g = *this;
    g.A0_ = -A0_;
    g.A1_ = -A1_;
    return g;
}

CurveFunction CurveFunction::add(const CurveFunction& a, const CurveFunction& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    CurveFunction r;
    r.E_ = a.E_;
    if (a.B_ == b.B_) {
        r.A0_ = subtract ? a.A0_ - b.A0_ : a.A0_ + b.A0_;
        r.A1_ = subtract ? a.A1_ - b.A1_ : a.A1_ + b.A1_;
        r.B_ = a.B_;
    } else {
        const KPoly g = gcd(a.B_, b.B_);
        const KPoly fa = b.B_.exact_div(g);
        const KPoly fb = a.B_.exact_div(g);
        const KPoly x0 = b.A0_ * fb, x1 = b.A1_ * fb;
        r.A0_ = subtract ? a.A0_ * fa - x0 : a.A0_ * fa + x0;
        r.A1_ = subtract ? a.A1_ * fa - x1 : a.A1_ * fa + x1;
        r.B_ = a.B_ * fa;
    }
    quad_normalize(r.A0_, r.A1_, r.B_);
    return r;
}

CurveFunction operator*(const CurveFunction& a, const CurveFunction& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (auto c = b.as_constant()) return a.scaled(*c);
    if (auto c = a.as_constant()) return b.scaled(*c);
    const CurvePolys cp = curve_polys(a.E_);
    CurveFunction r;
    r.E_ = a.E_;
    std::tie(r.A0_, r.A1_) = quad_mul_num(a.A0_, a.A1_, b.A0_, b.A1_, cp.lin, cp.cubic);
    r.B_ = a.B_ * b.B_;
    quad_normalize(r.A0_, r.A1_, r.B_);
    return r;
}

CurveFunction CurveFunction::scaled(const BaseElement& c) const {
    if (c.is_zero()) return zero(E_);
    CurveFunction r = *this;
    r.A0_ = A0_.scaled(c);
    r.A1_ = A1_.scaled(c);
    return r;
}

CurveFunction CurveFunction::inv() const {
    if (is_zero()) throw MathError("K(t,y): division by zero");
    const CurvePolys cp = curve_polys(E_);
    auto [c0, c1] = quad_conj_num(A0_, A1_, cp.lin);
    CurveFunction r;
    r.E_ = E_;
    r.A0_ = c0 * B_;
    r.A1_ = c1 * B_;
    r.B_ = quad_norm_num(A0_, A1_, cp.lin, cp.cubic);
    quad_normalize(r.A0_, r.A1_, r.B_);
    return r;
}

CurveFunction CurveFunction::pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    CurveFunction result = one(E_), base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

CurveFunction CurveFunction::twist(int k) const {
    if (k == 0) return *this;
    auto tw = [k](const BaseElement& c) { return c.twist(k); };
    CurveFunction r;
    r.E_ = E_;
    r.A0_ = A0_.map(tw);
    r.A1_ = A1_.map(tw);
    r.B_ = B_.map(tw);
    return r;
}

CurveFunction CurveFunction::conj() const {
    const CurvePolys cp = curve_polys(E_);
    auto [c0, c1] = quad_conj_num(A0_, A1_, cp.lin);
    return from_parts(E_, c0, c1, B_);
}

BaseElement CurveFunction::at_origin() const {
    const BaseElement b0 = B_.coeff(0);
    if (b0.is_zero()) throw MathError("at_origin: pole at t = 0");
    return A0_.coeff(0) / b0;
}

std::pair<int, BaseElement> CurveFunction::deg_sgn() const {
    if (is_zero()) throw MathError("deg_sgn of zero");
    const int d0 = A0_.is_zero() ? -1000000000 : 2 * A0_.degree();
    const int d1 = A1_.is_zero() ? -1000000000 : 2 * A1_.degree() + 3;
    const int dd = 2 * B_.degree();
    if (d0 > d1) return {d0 - dd, A0_.lc() / B_.lc()};
    return {d1 - dd, A1_.lc() / B_.lc()};
}

namespace {

std::string kpoly_to_string(const KPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const BaseElement& c = p.coeff(i);
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << '{' << c.to_string() << '}';
        if (i > 0) os << "*t";
        if (i > 1) os << '^' << i;
    }
    return os.str();
}

}  // namespace

std::string CurveFunction::to_string() const {
    return "(" + kpoly_to_string(A0_) + " ; " + kpoly_to_string(A1_) + ") / " + kpoly_to_string(B_);
}

// ---------------------------------------------------------------------------
// Divisors and Miller accumulation

CurveDivisor& CurveDivisor::add(const CurvePoint& P, int mult) {
    if (mult == 0) return *this;
    if (P.is_infinity) {
        inf_ += mult;
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->first == P) {
            it->second += mult;
            if (it->second == 0) terms_.erase(it);
            return *this;
        }
    }
    terms_.emplace_back(P, mult);
    return *this;
}

int CurveDivisor::multiplicity(const CurvePoint& P) const {
    if (P.is_infinity) return inf_;
    for (const auto& [Q, m] : terms_)
        if (Q == P) return m;
    return 0;
}

int CurveDivisor::degree() const {
    int d = inf_;
    for (const auto& t : terms_) d += t.second;
    return d;
}

CurvePoint CurveDivisor::sum(const CurvePtr& E) const {
    CurvePoint s = CurvePoint::infinity();
    for (const auto& [P, m] : terms_) s = point_add(E, s, point_mul(E, m, P));
    return s;
}

CurveDivisor CurveDivisor::twist(int k) const {
    CurveDivisor d;
    d.inf_ = inf_;
    for (const auto& [P, m] : terms_) d.add(P.twist(k), m);
    return d;
}

bool operator==(const CurveDivisor& a, const CurveDivisor& b) {
    if (a.inf_ != b.inf_ || a.terms_.size() != b.terms_.size()) return false;
    for (const auto& [P, m] : a.terms_)
        if (b.multiplicity(P) != m) return false;
    return true;
}

namespace {

// Polynomial functions accumulated as numerator / denominator.
struct Fraction {
    CurveFunction num, den;
};

CurveFunction vertical(const CurvePtr& E, const CurvePoint& R) {
    if (R.is_infinity) return CurveFunction::one(E);
    return CurveFunction::t(E) - CurveFunction::constant(R.x);
}

// l_{R,S} / v_{R+S}: divisor (R) + (S) - (R+S) - (inf).
std::pair<Fraction, CurvePoint> chord_ratio(const CurvePtr& E, const CurvePoint& R, const CurvePoint& S) {
    const CurveFunction one = CurveFunction::one(E);
    if (R.is_infinity) return {{one, one}, S};
    if (S.is_infinity) return {{one, one}, R};
    const auto lam = slope(E, R, S);
    if (!lam) return {{vertical(E, R), one}, CurvePoint::infinity()};
    const CurvePoint sum = point_add(E, R, S);
    const CurveFunction line = CurveFunction::y(E) - CurveFunction::constant(R.y) -
                               (CurveFunction::t(E) - CurveFunction::constant(R.x)).scaled(*lam);
    return {{line, vertical(E, sum)}, sum};
}

// f with divisor m(P) - ([m]P) - (m-1)(inf), m >= 1.
std::pair<Fraction, CurvePoint> miller(const CurvePtr& E, int m, const CurvePoint& P) {
    Fraction f{CurveFunction::one(E), CurveFunction::one(E)};
    CurvePoint R = P;
    for (int k = 1; k < m; ++k) {
        auto [ratio, next] = chord_ratio(E, R, P);
        f.num = f.num * ratio.num;
        f.den = f.den * ratio.den;
        R = next;
    }
    return {f, R};
}

}  // namespace

CurveFunction function_with_divisor(const CurvePtr& E, const CurveDivisor& D) {
    if (D.degree() != 0) throw InvalidInput("function_with_divisor: divisor has nonzero degree");
    if (!D.sum(E).is_infinity) throw InvalidInput("function_with_divisor: divisor is not principal");
    Fraction acc{CurveFunction::one(E), CurveFunction::one(E)};
    CurvePoint S = CurvePoint::infinity();
    for (const auto& [P, mult] : D.finite_part()) {
        auto [f, Pm] = miller(E, mult > 0 ? mult : -mult, P);
        Fraction piece = f;
        CurvePoint point = Pm;
        if (mult < 0) {
            // 1 / (f_m v_{[m]P}) has divisor -m(P) - ([-m]P) + (m+1)(inf).
            piece = {f.den, f.num * vertical(E, Pm)};
            point = point_neg(E, Pm);
        }
        auto [ratio, next] = chord_ratio(E, S, point);
        acc.num = acc.num * piece.num * ratio.num;
        acc.den = acc.den * piece.den * ratio.den;
        S = next;
    }
    if (!S.is_infinity) throw InconsistencyError("function_with_divisor: accumulated point is not infinity");
    CurveFunction g = acc.num / acc.den;
    const BaseElement sgn = g.deg_sgn().second;
    return g.scaled(sgn.inv());
}

// ---------------------------------------------------------------------------
// Local expansions

namespace {

// Horner evaluation of a polynomial at a series; constants are treated as
// known to a precision that never limits the result.
template <class C>
Laurent<C> poly_at_series(const Poly<C>& p, const Laurent<C>& x) {
    constexpr int kExact = 1 << 29;
    const int rel = static_cast<int>(x.coeffs().size());
    const int cprec = rel + std::max(0, x.val()) * std::max(0, p.degree()) + 1;
    Laurent<C> acc = Laurent<C>::zero_to(p.zero(), kExact);
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * x;
        const C& c = p.coeff(i);
        if (c.is_zero()) continue;
        const int need = acc.coeffs().empty() && acc.prec() > cprec ? cprec : std::max(1, acc.prec());
        acc = acc + Laurent<C>::monomial(c, 0, need);
    }
    return acc;
}

Laurent<BaseElement> series_from_poly(const KPoly& p, int prec) {
    std::vector<BaseElement> c;
    for (int i = 0; i < prec; ++i) c.push_back(p.coeff(i));
    return Laurent<BaseElement>(p.zero(), 0, std::move(c));
}

}  // namespace

Laurent<BaseElement> y_series_at(const CurvePtr& E, const CurvePoint& P, int terms) {
    if (P.is_infinity) throw InvalidInput("y_series_at: point at infinity");
    if (terms < 1) throw InvalidInput("y_series_at: terms must be positive");
    const CurvePolys cp = curve_polys(E);
    const KPoly lin = cp.lin.taylor_shift(P.x), cubic = cp.cubic.taylor_shift(P.x);
    const BaseElement d0 = P.y.scaled(E->field().from_int(2)) + lin.coeff(0);
    if (d0.is_zero()) throw InvalidInput("expand_at_point: t - x(P) is not a uniformizer (ramified point)");
    Laurent<BaseElement> Y(P.y.zero_like(), 0, {P.y});
    int prec = 1;
    while (prec < terms) {
        const int np = std::min(2 * prec, terms);
        std::vector<BaseElement> c = Y.coeffs();
        c.resize(np, P.y.zero_like());
        Y = Laurent<BaseElement>(P.y.zero_like(), 0, std::move(c));
        const Laurent<BaseElement> L = series_from_poly(lin, np), Cb = series_from_poly(cubic, np);
        const Laurent<BaseElement> H = Y * Y + L * Y - Cb;
        const Laurent<BaseElement> dH = Y.scaled(P.y.one_like().scaled(E->field().from_int(2))) + L;
        Y = Y - H / dH;
        Y = Y.truncated(np);
        prec = np;
    }
    return Y;
}

Laurent<BaseElement> expand_at_point(const CurveFunction& g, const CurvePoint& P, int terms) {
    if (P.is_infinity) throw InvalidInput("expand_at_point: use expand_at_infinity for the point at infinity");
    if (g.is_zero()) throw MathError("expand_at_point: zero function");
    if (terms < 1) throw InvalidInput("expand_at_point: terms must be positive");
    const KPoly A0 = g.A0().taylor_shift(P.x), A1 = g.A1().taylor_shift(P.x), B = g.B().taylor_shift(P.x);
    int ordB = 0;
    while (B.coeff(ordB).is_zero()) ++ordB;
    // Zero order of the numerator is bounded by its pole order at infinity.
    const int num_deg = std::max(A0.is_zero() ? 0 : 2 * A0.degree(), A1.is_zero() ? 0 : 2 * A1.degree() + 3);
    const int budget = num_deg + terms + 1;
    int M = std::min(budget, terms + 2);
    while (true) {
        const Laurent<BaseElement> Y = y_series_at(g.curve(), P, M);
        const Laurent<BaseElement> N = series_from_poly(A0, M) + series_from_poly(A1, M) * Y;
        const int vN = N.valuation();
        if (vN < M && M - vN >= terms) {
            const Laurent<BaseElement> Ns = N.stripped().truncated(vN + terms);
            const Laurent<BaseElement> Bs = series_from_poly(B, ordB + terms).stripped();
            return (Ns / Bs).truncated(vN - ordB + terms);
        }
        if (M >= budget) throw PrecisionError("expand_at_point: zero order exceeds the precision budget");
        M = std::min(budget, std::max(2 * M, (vN < M ? vN : M) + terms));
    }
}

int order_at(const CurveFunction& g, const CurvePoint& P) {
    if (P.is_infinity) return -g.degree();
    return expand_at_point(g, P, 1).val();
}

BaseElement evaluate(const CurveFunction& g, const CurvePoint& P) {
    if (P.is_infinity) throw InvalidInput("evaluate: point at infinity (use expand_at_infinity)");
    const BaseElement b = g.B().eval(P.x);
    if (!b.is_zero()) return (g.A0().eval(P.x) + g.A1().eval(P.x) * P.y) / b;
    const Laurent<BaseElement> s = expand_at_point(g, P, 1);
    if (s.val() < 0) throw MathError("evaluate: point is a pole of the function");
    if (s.val() > 0) return P.x.zero_like();
    return s.coeff(0);
}

InfinityChart infinity_chart(const CurvePtr& E, int rel_prec) {
    // s = 1/y solves s + c1 z s + c3 s^2 = z^3 + c2 z^2 s + c4 z s^2 + c6 s^3.
    const FiniteField* F = E->field_ptr();
    const CurveParams& c = E->params();
    const Fq zero(F, 0), one(F, 1);
    auto cst = [&](uint8_t v, int prec) { return Laurent<Fq>::monomial(Fq(F, v), 0, prec); };
    auto zpow = [&](int k, int prec) { return Laurent<Fq>::monomial(one, k, prec); };
    const int target = rel_prec + 3;  // s known modulo z^(3 + rel_prec)
    Laurent<Fq> s = zpow(3, 4);
    int prec = 4;
    while (prec < target) {
        const int np = std::min(2 * prec, target);
        std::vector<Fq> v = s.coeffs();
        v.resize(np - s.val(), zero);
        s = Laurent<Fq>(zero, s.val(), std::move(v));
        const Laurent<Fq> z = zpow(1, np + 1), z2 = zpow(2, np + 2), z3 = zpow(3, np + 3);
        const Laurent<Fq> s2 = s * s, s3 = s2 * s;
        const Laurent<Fq> G = s + (z * s).scaled(Fq(F, c.c1.v)) + s2.scaled(Fq(F, c.c3.v)) - z3 -
                              (z2 * s).scaled(Fq(F, c.c2.v)) - (z * s2).scaled(Fq(F, c.c4.v)) -
                              s3.scaled(Fq(F, c.c6.v));
        const Laurent<Fq> dG = cst(1, np) + z.scaled(Fq(F, c.c1.v)) + s.scaled(Fq(F, F->mul(F->from_int(2), c.c3.v))) -
                               z2.scaled(Fq(F, c.c2.v)) - (z * s).scaled(Fq(F, F->mul(F->from_int(2), c.c4.v))) -
                               s2.scaled(Fq(F, F->mul(F->from_int(3), c.c6.v)));
        s = (s - G.truncated(np) / dG.truncated(np)).truncated(np);
        prec = np;
    }
    const Laurent<Fq> y = s.inv();
    const Laurent<Fq> t = zpow(1, 1 + rel_prec + 1) * y;
    return {t.truncated(-2 + rel_prec), y.truncated(-3 + rel_prec)};
}

Laurent<BaseElement> expand_at_infinity(const CurveFunction& g, int terms) {
    if (g.is_zero()) throw MathError("expand_at_infinity: zero function");
    if (terms < 1) throw InvalidInput("expand_at_infinity: terms must be positive");
    const CurvePtr& E = g.curve();
    const int rel = terms + 4;
    const InfinityChart ch = infinity_chart(E, rel);
    auto lift = [&](const Fq& c) { return BaseElement::constant(E, c.value()); };
    const Laurent<BaseElement> T = ch.t.map(lift), Y = ch.y.map(lift);
    const Laurent<BaseElement> N = poly_at_series(g.A0(), T) + poly_at_series(g.A1(), T) * Y;
    const Laurent<BaseElement> D = poly_at_series(g.B(), T);
    const Laurent<BaseElement> r = N.stripped() / D.stripped();
    return r.truncated(r.val() + terms);
}

Laurent<Fq> expand_at_infinity(const BaseElement& x, int terms) {
    if (x.is_zero()) throw MathError("expand_at_infinity: zero element");
    if (terms < 1) throw InvalidInput("expand_at_infinity: terms must be positive");
    const InfinityChart ch = infinity_chart(x.curve(), terms + 4);
    const FiniteField* F = x.curve()->field_ptr();
    auto lift = [&](const FqPoly& p) {
        std::vector<Fq> c;
        for (uint8_t v : p.coeffs()) c.emplace_back(F, v);
        return Poly<Fq>(Fq(F, 0), std::move(c));
    };
    const Laurent<Fq> N = poly_at_series(lift(x.n0()), ch.t) + poly_at_series(lift(x.n1()), ch.t) * ch.y;
    const Laurent<Fq> D = poly_at_series(lift(x.den()), ch.t);
    const Laurent<Fq> r = N.stripped() / D.stripped();
    return r.truncated(r.val() + terms);
}

}  // namespace drinfeld
