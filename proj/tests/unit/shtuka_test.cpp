#include <gtest/gtest.h>

#include "drinfeld/verify.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::test;

namespace {

struct WorkedExample : ::testing::Test {
    CurvePtr E = curve_f3();
    BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    CurveFunction t = CurveFunction::t(E), y = CurveFunction::y(E), one = CurveFunction::one(E);
    CurveFunction T = C(th), H = C(h);
};

}  // namespace

TEST_F(WorkedExample, DrinfeldDivisorAndShtukaFunction) {
    const CurvePoint V = solve_drinfeld_divisor(E);
    EXPECT_EQ(V, CurvePoint::affine(th + o, h));
    const ShtukaData sh = build_shtuka(E, V);
    // f = (y - eta - eta (t - theta)) / (t - theta - 1), i.e. m = eta.
    EXPECT_EQ(sh.m, h);
    EXPECT_EQ(sh.f * (t - T - one), y - H - H * (t - T));
    EXPECT_EQ(sh.f.twist(1) * (t - T.twist(1) - one), y - H.twist(1) - H.twist(1) * (t - T.twist(1)));
    EXPECT_EQ(sh.xi * (th + o), -(h * (th + K(E, 2))));
    EXPECT_EQ(sh.m.deg_sgn(), std::make_pair(3, uint8_t{1}));
}

TEST_F(WorkedExample, BasisFunctions) {
    const ShtukaData sh = build_shtuka(E, solve_drinfeld_divisor(E));
    const MotiveBasis b = build_basis(sh, 2);
    const CurveFunction H2 = H * H;
    const CurveFunction g1 = (H2 + H * y + t - T - one) / (H * t * t + H * t * T + H * T * T + H * t - H * T + H);
    EXPECT_EQ(b.g[0], g1);
    const CurveFunction g2n =
        H2 * t * t + H2 * t * T + H2 * T * T + H2 * t - H2 * T - H2 + t * t + t * T + T * T + H * y - t + T;
    const CurveFunction g2d =
        H2 * t * t + H2 * t * T + H2 * T * T + H2 * t - H2 * T + H2 + t * t + t * T + T * T + t - T + one;
    EXPECT_EQ(b.g[1] * g2d, g2n);
    EXPECT_TRUE(in_N(b.h[0], sh, 2));
    EXPECT_TRUE(in_N(b.h[1], sh, 2));
}

TEST_F(WorkedExample, StructureCoefficients) {
    const Built B = build_all(E, 2);
    const BaseElement h2 = h * h;
    EXPECT_EQ(B.coeffs.a[0] * h.pow(3), -((h2 + o) * (h2 + o)));
    EXPECT_EQ(B.coeffs.a[1] * (h2 + o).pow(3), -(h.pow(3) * (h.pow(4) - h2 - o)));
    EXPECT_EQ(a_closed_form(B.sh, 2, 1), B.coeffs.a[0]);
    EXPECT_EQ(a_closed_form(B.sh, 2, 2), B.coeffs.a[1]);
    EXPECT_EQ(B.coeffs.b[0], B.coeffs.a[0]);
    EXPECT_EQ(B.coeffs.bn_q, B.coeffs.a[1]);
}

TEST(Shtuka, DivisorCharacterisationOnBothCurves) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const CurvePoint V = solve_drinfeld_divisor(E);
        ASSERT_FALSE(V.is_infinity);
        EXPECT_EQ(point_sub(E, V, V.twist(1)), CurvePoint::xi(E));
        EXPECT_EQ(V.x.deg_sgn(), std::make_pair(2, uint8_t{1}));
        EXPECT_EQ(V.y.deg_sgn(), std::make_pair(3, uint8_t{1}));
        const ShtukaData sh = build_shtuka(E, V);
        EXPECT_EQ(order_at(sh.f, V.twist(1)), 1);
        EXPECT_EQ(order_at(sh.f, V), -1);
        EXPECT_EQ(order_at(sh.f, CurvePoint::xi(E)), 1);
        EXPECT_EQ(order_at(sh.f, CurvePoint::infinity()), -1);
        // xi = -(m theta - eta) / alpha.
        EXPECT_EQ(sh.xi, -(sh.m * BaseElement::theta(E) - BaseElement::eta(E)) / sh.alpha);
    }
}

TEST(Shtuka, IdentitiesForHigherDimensions) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()})
        for (int n : {1, 2, 3, 4}) {
            const Built B = build_all(E, n);
            const CheckGroup g = shtuka_identities(B.sh, B.basis, B.coeffs);
            for (const auto& c : g.checks) EXPECT_TRUE(c.pass) << "q=" << E->q() << " n=" << n << ": " << c.name;
        }
}

TEST(Shtuka, ExtendedBasisRecursion) {
    const Built B = build_all(curve_f2(), 2);
    // g_{n+k} = f^n g_k^(1).
    const CurveFunction fn = B.sh.f * B.sh.f;
    EXPECT_EQ(extend_basis(B.basis, B.sh, BasisKind::g, 3), fn * B.basis.g[0].twist(1));
    EXPECT_EQ(extend_basis(B.basis, B.sh, BasisKind::g, 4), fn * B.basis.g[1].twist(1));
    EXPECT_EQ(extend_basis(B.basis, B.sh, BasisKind::g, 1), B.basis.g[0]);
}

TEST(Shtuka, SigmaDecompositionReassemblesAndEpsilonIsLinear) {
    const Built B = build_all(curve_f3(), 2);
    const CurveFunction t = CurveFunction::t(B.sh.curve);
    const SigmaContext ctx = make_sigma_context(B.basis, B.sh);
    const CurveFunction g1 = t * B.basis.h[0], g2 = B.basis.h[1] * B.basis.h[1];
    ASSERT_TRUE(in_N(g1, B.sh, 2));
    ASSERT_TRUE(in_N(g2, B.sh, 2));
    const SigmaDecomposition d1 = sigma_decompose(g1, ctx), d2 = sigma_decompose(g2, ctx);
    EXPECT_TRUE(sigma_reassembles(g1, d1, B.basis, B.sh));
    EXPECT_TRUE(sigma_reassembles(g2, d2, B.basis, B.sh));
    const auto e1 = epsilon(d1), e2 = epsilon(d2), e12 = epsilon(sigma_decompose(g1 + g2, ctx));
    ASSERT_EQ(e12.size(), 2u);
    for (int i = 0; i < 2; ++i) EXPECT_EQ(e12[i], e1[i] + e2[i]);
    // h_i itself maps to the standard basis vector e_{n+1-i}.
    const auto eh = epsilon(sigma_decompose(B.basis.h[0], ctx));
    EXPECT_TRUE(eh[0].is_zero());
    EXPECT_EQ(eh[1], BaseElement::one(B.sh.curve));
}

TEST(Shtuka, MembershipInN) {
    const Built B = build_all(curve_f3(), 2);
    EXPECT_FALSE(in_N(CurveFunction::one(B.sh.curve), B.sh, 2));
    EXPECT_FALSE(in_N(B.basis.g[0], B.sh, 2));  // not polynomial
}
