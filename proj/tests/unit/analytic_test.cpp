#include <gtest/gtest.h>

#include "drinfeld/verify.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::test;

TEST(InfSeries, EmbeddingAtInfinity) {
    const CurvePtr E = curve_f3();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E), o = BaseElement::one(E);
    // u = theta/eta has valuation 1; deg theta = 2, deg eta = 3.
    EXPECT_EQ(embed(th, 20).leading_exp(), -2);
    EXPECT_EQ(embed(h, 20).leading_exp(), -3);
    EXPECT_EQ(norm_exponent(embed(th, 20)), 2);
    const InfSeries u = embed(th / h, 20);
    EXPECT_EQ(u.leading_exp(), 1);
    EXPECT_EQ(u.rel_prec(), 20);
    for (int k = 1; k < u.abs_prec(); ++k) EXPECT_EQ(u.coeff(k).value(), k == 1 ? 1 : 0);
    // -(eta^2+1)^2/eta^3: leading exponent -3, leading coefficient -1.
    const InfSeries a1 = embed(-((h * h + o) * (h * h + o)) / h.pow(3), 20);
    EXPECT_EQ(a1.leading_exp(), -3);
    EXPECT_EQ(a1.coeff(-3).value(), 2);
    EXPECT_EQ(embed(th, 20) * embed(th.inv(), 20), embed(o, 20));
    EXPECT_TRUE(InfSeries::exact_zero(E->field_ptr()).is_zero());
    EXPECT_FALSE((embed(th, 5) - embed(th, 5)).is_zero());
    EXPECT_TRUE((embed(th, 5) - embed(th, 5)).is_zero_to_precision());
}

TEST(InfSeries, TwistAndTags) {
    const CurvePtr E = curve_f3();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E);
    const InfSeries x = embed(th + h, 12);
    EXPECT_EQ(series_twist(x, 1), embed((th + h).pow(3), 12));
    const InfSeries xi = embed(BaseElement::theta(E) / BaseElement::eta(E) + BaseElement::one(E), 16);
    const InfSeries tagged = InfSeries::from_series(x.series(), 2);
    // Moving one power of xi (q - 1 = 2 tag units) into the series.
    EXPECT_EQ(retag(tagged, 0, xi), InfSeries::from_series((x * xi).series(), 0));
    EXPECT_THROW(retag(tagged, 1, xi), InconsistencyError);
    EXPECT_THROW(tagged + x, MathError);
}

TEST(InfSeries, AgreeingCoefficients) {
    const CurvePtr E = curve_f2();
    const BaseElement th = BaseElement::theta(E), h = BaseElement::eta(E);
    const InfSeries a = embed(th / h, 30), b = embed(th / h + th.pow(-20), 30);
    // th^-20 has valuation 40: the first 39 coefficients from u^1 agree.
    EXPECT_EQ(agreeing_coeffs(a, b, 1), 30);
    const InfSeries c = embed(th / h + th.pow(-5), 30);
    EXPECT_EQ(agreeing_coeffs(a, c, 1), 9);
}

class AnalyticCurves : public ::testing::TestWithParam<int> {
protected:
    CurvePtr E() const { return GetParam() == 3 ? curve_f3() : curve_f2(); }
};

TEST_P(AnalyticCurves, OmegaFunctionalEquationAndPoles) {
    const ShtukaData sh = build_shtuka(E(), solve_drinfeld_divisor(E()));
    for (int n : {1, 2, 3}) {
        TruncationPolicy pol;
        const InfinityData inf = make_infinity_data(sh, pol, pol.local_terms_for(n));
        const OmegaResult om = omega_product(inf, n, 0), om1 = omega_product(inf, n, 1);
        const LocalExpansion f =
            embed_expansion(expand_at_point(sh.f, CurvePoint::xi(sh.curve), inf.local_terms), inf.WL);
        LocalExpansion rhs = om.value;
        for (int k = 0; k < n; ++k) rhs = rhs * f;
        EXPECT_TRUE(expansions_agree(retag(om1.value, n, inf.xi), rhs, pol.u_prec)) << "n=" << n;
        int lead = om.value.val();
        while (om.value.coeff(lead).is_zero_to_precision()) ++lead;
        EXPECT_EQ(lead, -n);
    }
}

TEST_P(AnalyticCurves, ResidueLawForGeneratingFunctions) {
    const Built B = build_all(E(), 2);
    TruncationPolicy pol;
    pol.exp_terms = 4;
    const InfinityData inf = make_infinity_data(B.sh, pol, pol.local_terms_for(2));
    const ExpLogCoeffs c = exp_log_coeffs(B.M, pol.exp_terms);
    const EmbeddedExp X = embed_exp(B.M, c, inf);
    for (const InfVector& u : sample_small_vectors(B.sh.curve, 2, 3, 5, inf)) {
        const GenFn G = anderson_gen_fn(B.M, X, u, 4, inf);
        const InfVector r = RES_Xi(G.G_at_Xi, inf);
        for (int k = 0; k < 2; ++k) EXPECT_GE(agreeing_coeffs(r[k], -u[k], u[k].leading_exp()), 20);
        EXPECT_TRUE(negligible(dt_gu_residual_norm(B.M, X, G, u, inf), G.tail_norm, pol));
    }
}

TEST_P(AnalyticCurves, PeriodMatchesResidueForm) {
    // Pi_n[last] / pi^n = (-1)^(n+1) w^(n-1) g_1(Xi) / (a_1 ... a_{n-1}) with
    // pi = -Res_Xi(omega_rho lambda), w = 2 eta + c1 theta + c3.
    for (int n : {1, 2}) {
        const Built B = build_all(E(), n);
        TruncationPolicy pol;
        const InfinityData inf = make_infinity_data(B.sh, pol, pol.local_terms_for(n));
        const PeriodResult P = period_vector(B.M, B.basis, inf);
        EXPECT_GE(P.residue_agree, 60) << "n=" << n;
        EXPECT_EQ(P.ratio_xi_power, -n);
        ASSERT_EQ(static_cast<int>(P.Pi.size()), n);
        for (const InfSeries& x : P.Pi) EXPECT_EQ(x.xi_num(), n);
    }
}

TEST_P(AnalyticCurves, PeriodStableUnderPrecisionDoubling) {
    const Built B = build_all(E(), 2);
    TruncationPolicy lo, hi;
    hi.u_prec = 2 * lo.u_prec;
    const PeriodResult a = period_vector(B.M, B.basis, make_infinity_data(B.sh, lo, lo.local_terms_for(2)));
    const PeriodResult b = period_vector(B.M, B.basis, make_infinity_data(B.sh, hi, hi.local_terms_for(2)));
    EXPECT_EQ(a.ratio_residue, b.ratio_residue);  // equality on the common precision
    EXPECT_GT(b.ratio_residue.rel_prec(), a.ratio_residue.rel_prec());
    EXPECT_GE(b.residue_agree, a.residue_agree);
}

TEST_P(AnalyticCurves, ExpOfPeriodDecays) {
    const Built B = build_all(E(), 1);
    TruncationPolicy pol;
    const InfinityData inf = make_infinity_data(B.sh, pol, pol.local_terms_for(1));
    const ExpLogCoeffs c = exp_log_coeffs(B.M, 6);
    const EmbeddedExp X = embed_exp(B.M, c, inf);
    const PeriodResult P = period_vector(B.M, B.basis, inf);
    const ExpEval ev = exp_eval(X, P.Pi, 6, inf);
    EXPECT_TRUE(ev.increments_decreasing);
    // The residue period is a genuine period of the rank-1 module: the
    // partial sum cancels far below its leading term z = Pi.
    ASSERT_GE(ev.term_norms.size(), 2u);
    EXPECT_LT(norm_exponent(ev.value), ev.term_norms[0] - 10);
}

INSTANTIATE_TEST_SUITE_P(BothCurves, AnalyticCurves, ::testing::Values(3, 2),
                         [](const auto& info) { return "q" + std::to_string(info.param); });

TEST(ProductFormula, AgreesWithResidueInCharacteristicTwo) {
    const ShtukaData sh = build_shtuka(curve_f2(), solve_drinfeld_divisor(curve_f2()));
    TruncationPolicy pol;
    const InfinityData inf = make_infinity_data(sh, pol, pol.local_terms_for(1));
    const ProductResult pr = pi_rho(inf);
    const InfSeries res = pi_rho_residue(inf);
    EXPECT_GE(agreeing_coeffs(retag(res, pr.value.xi_num(), inf.xi), pr.value, pr.value.leading_exp()), 40);
}

TEST(ProductFormula, DiffersFromResidueOnTheTernaryCurve) {
    // Recorded discrepancy: on y^2 = t^3 - t - 1 the product expression and
    // -Res_Xi(omega_rho lambda) differ already in the leading coefficient.
    const ShtukaData sh = build_shtuka(curve_f3(), solve_drinfeld_divisor(curve_f3()));
    TruncationPolicy pol;
    const InfinityData inf = make_infinity_data(sh, pol, pol.local_terms_for(1));
    const ProductResult pr = pi_rho(inf);
    const InfSeries res = retag(pi_rho_residue(inf), pr.value.xi_num(), inf.xi);
    EXPECT_EQ(agreeing_coeffs(res, pr.value, pr.value.leading_exp()), 0);
}
