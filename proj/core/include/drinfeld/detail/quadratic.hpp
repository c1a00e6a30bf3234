#pragma once

// Arithmetic in a quadratic function field P-frac[w]/(w^2 + lin*w - cubic),
// with elements stored as (a0 + a1*w) / b over a polynomial ring P.  Shared by
// K = F_q(theta, eta) (P = F_q[theta]) and K(t, y) (P = K[t]).

#include <utility>

#include "drinfeld/fq_poly.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld::detail {

inline FqPoly scale_to_monic_factor(const FqPoly& b, const FqPoly& x) {
    return x.scaled(b.field()->inv(b.lc()));
}
template <class C>
Poly<C> scale_to_monic_factor(const Poly<C>& b, const Poly<C>& x) {
    return x.scaled(b.lc().inv());
}
inline bool lc_is_one(const FqPoly& b) { return b.lc() == 1; }
template <class C>
bool lc_is_one(const Poly<C>& b) {
    return b.lc() == b.lc().one_like();
}

inline FqPoly one_like_poly(const FqPoly& b) { return FqPoly::constant(b.field(), 1); }
template <class C>
Poly<C> one_like_poly(const Poly<C>& b) {
    return Poly<C>::constant(b.zero().one_like());
}

/// Bring (a0 + a1 w)/b to lowest terms with b monic.
template <class P>
void quad_normalize(P& a0, P& a1, P& b) {
    if (b.is_zero()) throw MathError("zero denominator");
    if (a0.is_zero() && a1.is_zero()) {
        b = one_like_poly(b);
        return;
    }
    if (b.degree() > 0) {
        P g = gcd(b, a0.is_zero() ? a1 : a0);
        if (g.degree() > 0 && !a0.is_zero() && !a1.is_zero()) g = gcd(g, a1);
        if (g.degree() > 0) {
            a0 = a0.exact_div(g);
            a1 = a1.exact_div(g);
            b = b.exact_div(g);
        }
    }
    if (!lc_is_one(b)) {
        a0 = scale_to_monic_factor(b, a0);
        a1 = scale_to_monic_factor(b, a1);
        b = b.monic();
    }
}

/// Numerator product (x0 + x1 w)(y0 + y1 w) reduced by w^2 = cubic - lin*w.
template <class P>
std::pair<P, P> quad_mul_num(const P& x0, const P& x1, const P& y0, const P& y1, const P& lin,
                             const P& cubic) {
    if (x1.is_zero()) return {x0 * y0, x0 * y1};
    if (y1.is_zero()) return {x0 * y0, x1 * y0};
    P p00 = x0 * y0;
    P p11 = x1 * y1;
    P mid = (x0 + x1) * (y0 + y1) - p00 - p11;  // x0*y1 + x1*y0
    P r0 = p00 + p11 * cubic;
    P r1 = mid;
    if (!lin.is_zero()) r1 -= p11 * lin;
    return {std::move(r0), std::move(r1)};
}

/// Conjugate numerator: w -> -w - lin.
template <class P>
std::pair<P, P> quad_conj_num(const P& x0, const P& x1, const P& lin) {
    P c0 = x0;
    if (!lin.is_zero()) c0 -= x1 * lin;
    return {std::move(c0), -x1};
}

/// Norm of the numerator: x0^2 - x0 x1 lin - x1^2 cubic.
template <class P>
P quad_norm_num(const P& x0, const P& x1, const P& lin, const P& cubic) {
    P n = x0 * x0 - x1 * x1 * cubic;
    if (!lin.is_zero()) n -= x0 * x1 * lin;
    return n;
}

}  // namespace drinfeld::detail
