#include <gtest/gtest.h>

#include "drinfeld/verify.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::test;

TEST(TwistedOperator, CompositionTwistsTheRightFactor) {
    const CurvePtr E = curve_f3();
    const BaseElement th = BaseElement::theta(E);
    const KMatrix I = KMatrix::identity(1, BaseElement::zero(E));
    const KOperator tau = KOperator::monomial(I, 1);
    const KOperator c = KOperator::constant(KMatrix::scalar(1, th));
    // tau theta = theta^q tau.
    EXPECT_EQ(tau * c, KOperator::monomial(KMatrix::scalar(1, th.pow(3)), 1));
    EXPECT_EQ(c * tau, KOperator::monomial(KMatrix::scalar(1, th), 1));
    EXPECT_EQ((tau - tau).order(), -1);
    const std::vector<BaseElement> v{th};
    EXPECT_EQ((c + tau).apply(v)[0], th * th + th.pow(3));
}

TEST(AndersonModule, WorkedExampleRhoT) {
    const Built B = build_all(curve_f3(), 2);
    const CurvePtr& E = B.sh.curve;
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    const BaseElement h2 = h * h;
    KMatrix D(2, 2, BaseElement::zero(E)), Et(2, 2, BaseElement::zero(E));
    D(0, 0) = th;
    D(1, 1) = th;
    D(0, 1) = -((h2 + o) * (h2 + o)) / h.pow(3);
    Et(0, 0) = o;
    Et(1, 1) = o;
    Et(1, 0) = -(h.pow(3) * (h.pow(4) - h2 - o)) / (h2 + o).pow(3);
    EXPECT_EQ(B.M.rho_t, KOperator({D, Et}));
}

TEST(AndersonModule, ModuleIdentities) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()})
        for (int n : {2, 3}) {
            const Built B = build_all(E, n);
            const CheckGroup g = module_identities(B.M, B.basis, B.sh);
            for (const auto& c : g.checks) EXPECT_TRUE(c.pass) << "q=" << E->q() << " n=" << n << ": " << c.name;
        }
}

TEST(AndersonModule, RankOneModule) {
    const Built B = build_all(curve_f3(), 1);
    // rho_t = theta + a_1 tau + tau^2.
    ASSERT_EQ(B.M.rho_t.order(), 2);
    EXPECT_EQ(B.M.rho_t.coeff(0)(0, 0), BaseElement::theta(B.sh.curve));
    EXPECT_EQ(B.M.rho_t.coeff(1)(0, 0), B.coeffs.a[0]);
    EXPECT_EQ(B.M.rho_t.coeff(2)(0, 0), BaseElement::one(B.sh.curve));
    EXPECT_EQ(B.M.rho_t * B.M.rho_y, B.M.rho_y * B.M.rho_t);
}

TEST(AndersonModule, RhoOfPolynomials) {
    const Built B = build_all(curve_f3(), 2);
    // a = t^2: constant term d[theta]^2.
    const AElement t2{{0, 0, 1}, {}};
    EXPECT_EQ(d_of(B.M, t2), B.M.dtheta() * B.M.dtheta());
    EXPECT_EQ(rho_a(B.M, t2), B.M.rho_t * B.M.rho_t);
    // a = t y.
    const AElement ty{{}, {0, 1}};
    EXPECT_EQ(rho_a(B.M, ty), B.M.rho_t * B.M.rho_y);
    const BaseElement th = BaseElement::theta(B.sh.curve), h = BaseElement::eta(B.sh.curve);
    EXPECT_EQ(iota(B.sh.curve, ty), th * h);
}

TEST(Sylvester, SolvesStructuredEquation) {
    const CurvePtr E = curve_f2();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    KMatrix L = KMatrix::scalar(2, th), R = KMatrix::scalar(2, th.pow(2)), B(2, 2, BaseElement::zero(E));
    L(0, 1) = h;
    R(0, 1) = o;
    B(0, 0) = o;
    B(1, 0) = h;
    B(1, 1) = th;
    const KMatrix X = sylvester_solve(L, R, B);
    EXPECT_EQ(X * R - L * X, B);
    EXPECT_THROW(sylvester_solve(L, L, B), MathError);
}

TEST(ExpLog, WorkedExampleFirstCoefficient) {
    const Built B = build_all(curve_f3(), 2);
    const ExpLogCoeffs c = exp_log_coeffs(B.M, 2);
    ASSERT_EQ(c.Q.size(), 3u);
    const KMatrix I = KMatrix::identity(2, BaseElement::zero(B.sh.curve));
    EXPECT_EQ(c.Q[0], I);
    EXPECT_EQ(c.P[0], I);
    // Degree-q coefficient of Exp(d[theta] z) = rho_t(Exp z):
    //   Q_1 d[theta]^(1) = d[theta] Q_1 + E_theta.
    EXPECT_EQ(c.Q[1] * twist(B.M.dtheta(), 1), B.M.dtheta() * c.Q[1] + B.M.Etheta());
    // Log: P_1 is minus Q_1 (composition to order 1).
    EXPECT_EQ(c.P[1], -c.Q[1]);
}

TEST(ExpLog, CoherenceThroughOrderFour) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const Built B = build_all(E, 2);
        const CheckGroup g = exp_log_identities(B.M, exp_log_coeffs(B.M, 4));
        for (const auto& c : g.checks) EXPECT_TRUE(c.pass) << "q=" << E->q() << ": " << c.name;
    }
}

TEST(Epsilon, DiagramCommutesOnSamples) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const Built B = build_all(E, 2);
        const CheckGroup g = epsilon_diagram(B.M, B.basis, B.sh, 4, 11);
        for (const auto& c : g.checks) EXPECT_TRUE(c.pass) << "q=" << E->q() << ": " << c.name;
    }
}
