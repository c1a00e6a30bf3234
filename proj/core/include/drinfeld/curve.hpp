#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/finite_field.hpp"
#include "drinfeld/fq_poly.hpp"
#include "drinfeld/laurent.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld {

/// Weierstrass coefficients of y^2 + c1 t y + c3 y = t^3 + c2 t^2 + c4 t + c6.
struct CurveParams {
    FqElement c1, c2, c3, c4, c6;
};

/// An elliptic curve over F_q together with the data needed for exact
/// arithmetic in K = F_q(theta, eta), where (theta, eta) is the generic point.
class Curve {
public:
    Curve(std::shared_ptr<const FiniteField> F, const CurveParams& params);
    static std::shared_ptr<const Curve> make(std::shared_ptr<const FiniteField> F,
                                             const CurveParams& params) {
        return std::make_shared<const Curve>(std::move(F), params);
    }

    const FiniteField& field() const { return *F_; }
    const FiniteField* field_ptr() const { return F_.get(); }
    const std::shared_ptr<const FiniteField>& field_shared() const { return F_; }
    const CurveParams& params() const { return params_; }
    int q() const { return F_->q(); }

    /// c1 x + c3 and x^3 + c2 x^2 + c4 x + c6 as polynomials over F_q.
    const FqPoly& lin() const { return lin_; }
    const FqPoly& cubic() const { return cubic_; }
    /// eta^q = eta_q0(theta) + eta_q1(theta) * eta.
    const FqPoly& eta_q0() const { return eta_q0_; }
    const FqPoly& eta_q1() const { return eta_q1_; }

    uint8_t discriminant() const { return disc_; }
    /// #E(F_q), including the point at infinity, by enumeration.
    int count_fq_points() const;
    /// True when (x, y) in F_q^2 satisfies the curve equation.
    bool on_curve_fq(uint8_t x, uint8_t y) const;

    bool same_as(const Curve& o) const;

private:
    std::shared_ptr<const FiniteField> F_;
    CurveParams params_;
    FqPoly lin_, cubic_, eta_q0_, eta_q1_;
    uint8_t disc_ = 0;
};

using CurvePtr = std::shared_ptr<const Curve>;

/// Exact element (n0(theta) + n1(theta) eta) / den(theta) of K, in lowest terms
/// with den monic.
class BaseElement {
public:
    BaseElement() = default;

    static BaseElement zero(const CurvePtr& E);
    static BaseElement one(const CurvePtr& E) { return constant(E, 1); }
    static BaseElement constant(const CurvePtr& E, uint8_t c);
    static BaseElement theta(const CurvePtr& E);
    static BaseElement eta(const CurvePtr& E);
    /// Build from arbitrary parts; normalizes to lowest terms.
    static BaseElement from_parts(const CurvePtr& E, FqPoly n0, FqPoly n1, FqPoly den);
    /// An element of A = F_q[theta, eta].
    static BaseElement from_integral(const CurvePtr& E, FqPoly n0, FqPoly n1);

    const CurvePtr& curve() const { return E_; }
    const FqPoly& n0() const { return n0_; }
    const FqPoly& n1() const { return n1_; }
    const FqPoly& den() const { return den_; }

    bool is_zero() const { return n0_.is_zero() && n1_.is_zero(); }
    bool is_integral() const { return den_.is_one(); }
    /// The value as an element of F_q, if it is one.
    std::optional<uint8_t> as_constant() const;

    BaseElement zero_like() const { return zero(E_); }
    BaseElement one_like() const { return one(E_); }

    BaseElement operator-() const;
    friend BaseElement operator+(const BaseElement& a, const BaseElement& b) { return add(a, b, false); }
    friend BaseElement operator-(const BaseElement& a, const BaseElement& b) { return add(a, b, true); }
    friend BaseElement operator*(const BaseElement& a, const BaseElement& b);
    friend BaseElement operator/(const BaseElement& a, const BaseElement& b) { return a * b.inv(); }
    BaseElement inv() const;
    BaseElement pow(long long e) const;
    BaseElement scaled(uint8_t c) const;

    friend bool operator==(const BaseElement& a, const BaseElement& b) {
        return a.n0_ == b.n0_ && a.n1_ == b.n1_ && a.den_ == b.den_;
    }
    friend bool operator!=(const BaseElement& a, const BaseElement& b) { return !(a == b); }

    /// x^(q^k); k < 0 takes q-th roots and throws InconsistencyError when the
    /// root does not lie in K.
    BaseElement twist(int k = 1) const;
    /// Image under eta -> -eta - c1 theta - c3.
    BaseElement conj() const;

    /// (degree, sign): degree is -ord_infinity with deg theta = 2, deg eta = 3.
    std::pair<int, uint8_t> deg_sgn() const;
    int degree() const { return deg_sgn().first; }

    std::string to_string() const;

private:
    static BaseElement add(const BaseElement& a, const BaseElement& b, bool subtract);
    BaseElement twist_once() const;
    BaseElement untwist_once() const;

    CurvePtr E_;
    FqPoly n0_, n1_, den_;
};

using KPoly = Poly<BaseElement>;

/// A point of E(K), or the point at infinity.
struct CurvePoint {
    bool is_infinity = true;
    BaseElement x, y;

    static CurvePoint infinity() { return {}; }
    static CurvePoint affine(BaseElement x, BaseElement y) { return {false, std::move(x), std::move(y)}; }
    /// The generic point Xi = (theta, eta).
    static CurvePoint xi(const CurvePtr& E);

    CurvePoint twist(int k = 1) const;
    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        if (a.is_infinity || b.is_infinity) return a.is_infinity == b.is_infinity;
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const CurvePoint& a, const CurvePoint& b) { return !(a == b); }
    std::string to_string() const;
};

bool on_curve(const CurvePtr& E, const CurvePoint& P);
CurvePoint point_neg(const CurvePtr& E, const CurvePoint& P);
CurvePoint point_add(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint point_sub(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint point_mul(const CurvePtr& E, long long k, const CurvePoint& P);

enum class PointOp { add, neg, sub, scalar };
/// Uniform entry point for the group law; `k` is used by `scalar` only.
CurvePoint point_op(const CurvePtr& E, const CurvePoint& P, const CurvePoint& Q, PointOp op,
                    long long k = 0);

/// Exact element (A0(t) + A1(t) y) / B(t) of K(t, y), in lowest terms with B
/// monic.
class CurveFunction {
public:
    CurveFunction() = default;

    static CurveFunction constant(const BaseElement& c);
    static CurveFunction zero(const CurvePtr& E) { return constant(BaseElement::zero(E)); }
    static CurveFunction one(const CurvePtr& E) { return constant(BaseElement::one(E)); }
    static CurveFunction t(const CurvePtr& E);
    static CurveFunction y(const CurvePtr& E);
    static CurveFunction from_parts(const CurvePtr& E, KPoly A0, KPoly A1, KPoly B);

    const CurvePtr& curve() const { return E_; }
    const KPoly& A0() const { return A0_; }
    const KPoly& A1() const { return A1_; }
    const KPoly& B() const { return B_; }

    bool is_zero() const { return A0_.is_zero() && A1_.is_zero(); }
    /// True when the function lies in K[t, y].
    bool is_polynomial() const { return B_.degree() == 0; }
    /// The value as an element of K, if it is constant.
    std::optional<BaseElement> as_constant() const;

    CurveFunction zero_like() const { return zero(E_); }
    CurveFunction one_like() const { return one(E_); }

    CurveFunction operator-() const;
    friend CurveFunction operator+(const CurveFunction& a, const CurveFunction& b) { return add(a, b, false); }
    friend CurveFunction operator-(const CurveFunction& a, const CurveFunction& b) { return add(a, b, true); }
    friend CurveFunction operator*(const CurveFunction& a, const CurveFunction& b);
    friend CurveFunction operator/(const CurveFunction& a, const CurveFunction& b) { return a * b.inv(); }
    CurveFunction inv() const;
    CurveFunction pow(long long e) const;
    CurveFunction scaled(const BaseElement& c) const;

    friend bool operator==(const CurveFunction& a, const CurveFunction& b) {
        return a.A0_ == b.A0_ && a.A1_ == b.A1_ && a.B_ == b.B_;
    }
    friend bool operator!=(const CurveFunction& a, const CurveFunction& b) { return !(a == b); }

    /// Twist of the K-coefficients; t and y are fixed.
    CurveFunction twist(int k = 1) const;
    /// Image under y -> -y - c1 t - c3.
    CurveFunction conj() const;
    /// Substitute (t, y) = (0, 0) into a polynomial function.
    BaseElement at_origin() const;

    /// (degree, sign) with deg t = 2, deg y = 3; the sign lies in K.
    std::pair<int, BaseElement> deg_sgn() const;
    int degree() const { return deg_sgn().first; }

    std::string to_string() const;

private:
    static CurveFunction add(const CurveFunction& a, const CurveFunction& b, bool subtract);
    CurvePtr E_;
    KPoly A0_, A1_, B_;
};

/// Twisting entry points mirroring the member functions.
inline BaseElement twist(const BaseElement& x, int k) { return x.twist(k); }
inline CurveFunction twist(const CurveFunction& g, int k) { return g.twist(k); }
inline CurvePoint twist(const CurvePoint& P, int k) { return P.twist(k); }

/// Finite formal sum of points with integer multiplicities, plus a
/// multiplicity at infinity.  Canonical: no zero multiplicities, points
/// deduplicated.
class CurveDivisor {
public:
    CurveDivisor& add(const CurvePoint& P, int mult);
    const std::vector<std::pair<CurvePoint, int>>& finite_part() const { return terms_; }
    int infinity_mult() const { return inf_; }
    int multiplicity(const CurvePoint& P) const;
    int degree() const;
    /// Group-law sum of the support weighted by multiplicities.
    CurvePoint sum(const CurvePtr& E) const;
    CurveDivisor twist(int k) const;
    friend bool operator==(const CurveDivisor& a, const CurveDivisor& b);

private:
    std::vector<std::pair<CurvePoint, int>> terms_;
    int inf_ = 0;
};

/// The function with divisor D and sign 1 (Miller accumulation of line
/// functions).  Throws InvalidInput when D is not principal.
CurveFunction function_with_divisor(const CurvePtr& E, const CurveDivisor& D);

/// Substitute t -> x(P), y -> y(P).
BaseElement evaluate(const CurveFunction& g, const CurvePoint& P);

/// Power series y(x) of the curve near P in x = t - x(P), to `terms` terms.
Laurent<BaseElement> y_series_at(const CurvePtr& E, const CurvePoint& P, int terms);

/// Laurent expansion of g in x = t - x(P) with exactly `terms` known
/// coefficients starting at the leading order.
Laurent<BaseElement> expand_at_point(const CurveFunction& g, const CurvePoint& P, int terms);

/// Order of vanishing of g at P (negative for poles); P may be infinity.
int order_at(const CurveFunction& g, const CurvePoint& P);

/// Series t(z), y(z) at infinity in z = t / y over F_q, known modulo z^(k+prec).
struct InfinityChart {
    Laurent<Fq> t, y;
};
InfinityChart infinity_chart(const CurvePtr& E, int rel_prec);

/// Expansion at infinity in z = t / y with `terms` coefficients.
Laurent<BaseElement> expand_at_infinity(const CurveFunction& g, int terms);
/// Expansion of a K element at infinity in u = theta / eta with `terms`
/// coefficients over F_q.
Laurent<Fq> expand_at_infinity(const BaseElement& x, int terms);

}  // namespace drinfeld
