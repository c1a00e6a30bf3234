#include <gtest/gtest.h>

#include "drinfeld/fq_poly.hpp"
#include "drinfeld/text.hpp"

using namespace drinfeld;

TEST(FiniteField, PrimeFieldTables) {
    const auto F = FiniteField::make({3, 1, {}});
    EXPECT_EQ(F->q(), 3);
    EXPECT_EQ(F->add(2, 2), 1);
    EXPECT_EQ(F->mul(2, 2), 1);
    EXPECT_EQ(F->neg(1), 2);
    EXPECT_EQ(F->inv(2), 2);
    EXPECT_EQ(F->from_int(-1), 2);
    EXPECT_EQ(F->from_int(7), 1);
    EXPECT_EQ(F->frobenius(2), 2);
    EXPECT_THROW(F->inv(0), MathError);
}

TEST(FiniteField, ExtensionFieldF4) {
    // F_4 = F_2[x]/(x^2 + x + 1); x is encoded as 2 and x + 1 as 3.
    const auto F = FiniteField::make({2, 2, {1, 1, 1}});
    EXPECT_EQ(F->q(), 4);
    EXPECT_EQ(F->mul(2, 2), 3);      // x^2 = x + 1
    EXPECT_EQ(F->mul(2, 3), 1);      // x (x + 1) = 1
    EXPECT_EQ(F->pow(2, 3), 1);      // F_4^* has order 3
    EXPECT_EQ(F->frobenius(2), 3);   // x^2
    EXPECT_EQ(F->add(2, 3), 1);
    EXPECT_EQ(F->to_string(2), "[0,1]");
    EXPECT_EQ(parse_fq(*F, "[0,1]"), 2);
    EXPECT_EQ(F->coords(3), (std::vector<int>{1, 1}));
}

TEST(FiniteField, RejectsBadConfigurations) {
    EXPECT_THROW(FiniteField::make({4, 1, {}}), InvalidInput);
    // x^2 + 1 = (x + 1)^2 over F_2 is reducible.
    EXPECT_THROW(FiniteField::make({2, 2, {1, 0, 1}}), InvalidInput);
    // Not monic.
    EXPECT_THROW(FiniteField::make({3, 2, {1, 0, 2}}), InvalidInput);
}

TEST(FiniteField, ParserErrorsCarryOffsets) {
    const auto F = FiniteField::make({3, 1, {}});
    EXPECT_EQ(parse_fq(*F, " 2 "), 2);
    EXPECT_THROW(parse_fq(*F, "3"), InvalidInput);
    EXPECT_EQ(parse_fq(*F, "[1]"), 1);
    EXPECT_THROW(parse_fq(*F, "[1,0]"), InvalidInput);
    try {
        parse_fq(*F, "1 x");
        FAIL() << "trailing text accepted";
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("offset 2"), std::string::npos) << e.what();
    }
}

TEST(FqPoly, FreshmansDreamInCharacteristicThree) {
    const auto F = FiniteField::make({3, 1, {}});
    const FqPoly x = FqPoly::x(F.get()), one = FqPoly::constant(F.get(), 1);
    const FqPoly s = x + one;
    EXPECT_EQ(s * s * s, x * x * x + one);
}

TEST(FqPoly, DivisionAndGcd) {
    const auto F = FiniteField::make({3, 1, {}});
    const FiniteField* f = F.get();
    const FqPoly x = FqPoly::x(f), one = FqPoly::constant(f, 1);
    // x^3 - x = x (x - 1)(x + 1) over F_3.
    const FqPoly p = x * x * x - x;
    const auto [q, r] = p.divrem(x - one);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(q, x * x + x);
    EXPECT_EQ(gcd(p, x * x - one), x * x - one);
    EXPECT_THROW(p.exact_div(x * x + one), InconsistencyError);  // x^2 + 1 is irreducible over F_3
    EXPECT_EQ(p.eval(2), 0);
    EXPECT_EQ((x * x + one).eval(1), 2);
}

TEST(FqPoly, SpreadAndText) {
    const auto F = FiniteField::make({3, 1, {}});
    const FiniteField* f = F.get();
    const FqPoly p(f, {2, 0, 1});  // theta^2 + 2
    EXPECT_EQ(p.to_string("theta"), "theta^2 + 2");
    EXPECT_EQ(p.spread(3), FqPoly(f, {2, 0, 0, 0, 0, 0, 1}));
    EXPECT_EQ(p.spread(3).unspread(3), p);
    EXPECT_FALSE(FqPoly(f, {0, 1}).unspread(2).has_value());
    EXPECT_EQ(parse_fq_poly(f, p.to_string("theta"), "theta"), p);
    EXPECT_EQ(parse_fq_poly(f, "0", "theta"), FqPoly(f));
    EXPECT_THROW(parse_fq_poly(f, "theta + theta", "theta"), InvalidInput);
}
