#include <gtest/gtest.h>

#include "drinfeld/text.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::test;

TEST(Curve, TestCurvesHaveOnlyTheRationalPointAtInfinity) {
    // y^2 = t^3 - t - 1 over F_3: t^3 - t - 1 = 2 for every t, a non-square.
    EXPECT_EQ(curve_f3()->count_fq_points(), 1);
    // y^2 + y takes only the value 0 on F_2, and t^3 + t + 1 = 1 on F_2.
    EXPECT_EQ(curve_f2()->count_fq_points(), 1);
}

TEST(Curve, SingularCurveRejected) {
    EXPECT_THROW(Curve::make(FiniteField::make({3, 1, {}}), {{0}, {0}, {0}, {0}, {0}}), InvalidInput);
}

TEST(BaseElement, CurveEquationHoldsInK) {
    const CurvePtr E = curve_f3();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    EXPECT_EQ(h * h, th.pow(3) - th - o);
    const CurvePtr E2 = curve_f2();
    const BaseElement t2 = BaseElement::theta(E2), h2 = BaseElement::eta(E2), o2 = BaseElement::one(E2);
    EXPECT_EQ(h2 * h2 + h2, t2.pow(3) + t2 + o2);
}

TEST(BaseElement, InverseTwistConjugateAndDegree) {
    const CurvePtr E = curve_f3();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    const BaseElement x = (h + th) / (th * th + o);
    EXPECT_EQ(x * x.inv(), o);
    EXPECT_EQ(th.twist(1), th.pow(3));
    EXPECT_EQ(h.twist(1), h.pow(3));
    EXPECT_EQ(x.twist(1), x.pow(3));
    EXPECT_EQ(x.twist(1).twist(-1), x);
    EXPECT_EQ(h.conj(), -h);
    EXPECT_EQ(BaseElement::eta(curve_f2()).conj(), BaseElement::eta(curve_f2()) + BaseElement::one(curve_f2()));
    EXPECT_EQ(th.deg_sgn(), std::make_pair(2, uint8_t{1}));
    EXPECT_EQ(h.deg_sgn(), std::make_pair(3, uint8_t{1}));
    // -(eta^2 + 1)^2 / eta^3 has degree 12 - 9 = 3 and sign -1.
    EXPECT_EQ((-((h * h + o) * (h * h + o)) / h.pow(3)).deg_sgn(), std::make_pair(3, uint8_t{2}));
    EXPECT_THROW(o / BaseElement::zero(E), MathError);
}

TEST(CurvePoint, GroupLaw) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const CurvePoint X = CurvePoint::xi(E);
        const CurvePoint O = CurvePoint::infinity();
        const CurvePoint V = solve_drinfeld_divisor(E);
        const CurvePoint W = V.twist(1);
        EXPECT_TRUE(on_curve(E, X));
        EXPECT_EQ(point_add(E, X, O), X);
        EXPECT_EQ(point_add(E, X, point_neg(E, X)), O);
        EXPECT_EQ(point_mul(E, 2, X), point_add(E, X, X));
        EXPECT_EQ(point_mul(E, 3, X), point_add(E, point_add(E, X, X), X));
        EXPECT_EQ(point_add(E, point_add(E, X, V), W), point_add(E, X, point_add(E, V, W)));
        EXPECT_EQ(point_add(E, V, W), point_add(E, W, V));
        EXPECT_TRUE(on_curve(E, point_add(E, V, W)));
        EXPECT_EQ(point_sub(E, V, W), point_op(E, V, W, PointOp::sub));
        EXPECT_EQ(point_mul(E, -1, V), point_neg(E, V));
    }
    // -(x, y) = (x, y + 1) on y^2 + y = t^3 + t + 1.
    const CurvePtr E2 = curve_f2();
    const CurvePoint X2 = CurvePoint::xi(E2);
    EXPECT_EQ(point_neg(E2, X2).y, X2.y + BaseElement::one(E2));
}

TEST(CurveFunction, ArithmeticAndOrders) {
    const CurvePtr E = curve_f3();
    const auto t = CurveFunction::t(E), y = CurveFunction::y(E), one = CurveFunction::one(E);
    const auto th = C(BaseElement::theta(E));
    EXPECT_EQ(y * y, t * t * t - t - one);
    EXPECT_EQ(order_at(t - th, CurvePoint::xi(E)), 1);
    EXPECT_EQ(order_at(t, CurvePoint::infinity()), -2);
    EXPECT_EQ(order_at(y, CurvePoint::infinity()), -3);
    EXPECT_EQ(order_at((t - th).inv(), CurvePoint::xi(E)), -1);
    const CurveFunction g = (y + t) / (t * t + one);
    EXPECT_EQ(g * (t * t + one), y + t);
    EXPECT_EQ(g.twist(1).twist(-1), g);
}

TEST(CurveFunction, FunctionWithDivisor) {
    const CurvePtr E = curve_f3();
    const CurvePoint X = CurvePoint::xi(E);
    // t - theta vanishes at Xi and -Xi and has a double pole at infinity.
    CurveDivisor D;
    D.add(X, 1).add(point_neg(E, X), 1).add(CurvePoint::infinity(), -2);
    EXPECT_EQ(function_with_divisor(E, D), CurveFunction::t(E) - C(BaseElement::theta(E)));
    // (Xi) - (inf) is not principal.
    CurveDivisor P;
    P.add(X, 1).add(CurvePoint::infinity(), -1);
    EXPECT_THROW(function_with_divisor(E, P), InvalidInput);
}

TEST(Text, CanonicalFormsRoundTrip) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const ShtukaData sh = build_shtuka(E, solve_drinfeld_divisor(E));
        EXPECT_EQ(parse_base_element(E, sh.xi.to_string()), sh.xi);
        EXPECT_EQ(parse_curve_function(E, sh.f.to_string()), sh.f);
        EXPECT_EQ(parse_curve_point(E, sh.V.to_string()), sh.V);
        EXPECT_EQ(parse_curve_point(E, "inf"), CurvePoint::infinity());
        EXPECT_EQ(parse_base_element(E, BaseElement::zero(E).to_string()), BaseElement::zero(E));
        EXPECT_EQ(parse_curve_function(E, CurveFunction::zero(E).to_string()), CurveFunction::zero(E));
    }
}

TEST(Text, MalformedInputRejected) {
    const CurvePtr E = curve_f3();
    EXPECT_THROW(parse_base_element(E, "(theta ; 0) /"), InvalidInput);
    EXPECT_THROW(parse_base_element(E, "(theta ; 0) / 0"), InvalidInput);
    EXPECT_THROW(parse_curve_point(E, "[(1 ; 0) / 1]"), InvalidInput);
    EXPECT_THROW(parse_curve_function(E, "({(1 ; 0) / 1} ; 0) / 0"), InvalidInput);
}
