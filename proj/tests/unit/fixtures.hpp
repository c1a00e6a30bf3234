#pragma once

#include "drinfeld/analytic.hpp"
#include "drinfeld/anderson.hpp"
#include "drinfeld/shtuka.hpp"

namespace drinfeld::test {

/// y^2 = t^3 - t - 1 over F_3.
inline CurvePtr curve_f3() {
    static const CurvePtr E = Curve::make(FiniteField::make({3, 1, {}}), {{0}, {0}, {0}, {2}, {2}});
    return E;
}

/// y^2 + y = t^3 + t + 1 over F_2.
inline CurvePtr curve_f2() {
    static const CurvePtr E = Curve::make(FiniteField::make({2, 1, {}}), {{0}, {0}, {1}, {1}, {1}});
    return E;
}

/// Shtuka, bases, structure constants and module for one (curve, n).
struct Built {
    ShtukaData sh;
    MotiveBasis basis;
    StructureCoeffs coeffs;
    AndersonModule M;
};

inline Built build_all(const CurvePtr& E, int n) {
    Built b;
    b.sh = build_shtuka(E, solve_drinfeld_divisor(E));
    b.basis = build_basis(b.sh, n);
    b.coeffs = structure_coeffs(b.basis, b.sh);
    b.M = build_module(b.basis, b.sh, b.coeffs);
    return b;
}

inline BaseElement K(const CurvePtr& E, uint8_t c) { return BaseElement::constant(E, c); }
inline CurveFunction C(const BaseElement& x) { return CurveFunction::constant(x); }

}  // namespace drinfeld::test
