#pragma once

#include <optional>
#include <vector>

#include "drinfeld/curve.hpp"

namespace drinfeld {

/// The Drinfeld divisor V = (alpha, beta) and the shtuka function f = nu/delta.
struct ShtukaData {
    CurvePtr curve;
    CurvePoint V;
    CurveFunction f, nu, delta;
    BaseElement m, alpha, beta, xi;
};

/// The unique point V with V - V^(1) = Xi whose coordinates have degrees 2
/// and 3 with sign 1.  Requires #E(F_q) = 1.
CurvePoint solve_drinfeld_divisor(const CurvePtr& E);

/// m, nu, delta, f and xi = -(m theta - eta)/alpha for a given V; the divisor
/// of f is verified.
ShtukaData build_shtuka(const CurvePtr& E, const CurvePoint& V);

/// [i] V^(1) + [n - i] V.
CurvePoint basis_point(const ShtukaData& sh, int n, int i);

/// The divisors defining g_j and h_j (1 <= j <= n).
CurveDivisor g_divisor(const ShtukaData& sh, int n, int j);
CurveDivisor h_divisor(const ShtukaData& sh, int n, int j);

/// Bases g_1..g_n of M and h_1..h_n of N (stored zero-based).
struct MotiveBasis {
    int n = 0;
    std::vector<CurveFunction> g, h;
};

/// Builds both bases; n == 1 is accepted for testing the degenerate case.
MotiveBasis build_basis(const ShtukaData& sh, int n);

enum class BasisKind { g, h };

/// g_i for any i >= 1 (i > n via g_{jn+k} = (f f^(1) ... f^(j-1))^n g_k^(j)),
/// and h_i for i >= 1 (i > n via h_{jn+k} = (f f^(-1) ... f^(-(j-1)))^n h_k^(-j),
/// which throws when the negative twists leave K).
CurveFunction extend_basis(const MotiveBasis& basis, const ShtukaData& sh, BasisKind kind, int i);

/// (h_i)^(s) for i = jn + k with s >= j:
///   (f^(s) f^(s-1) ... f^(s-j+1))^n h_k^(s-j).
CurveFunction twisted_h(const MotiveBasis& basis, const ShtukaData& sh, int i, int s);

/// Structure constants of the bases, with b_n stored as its q-th power.
///
/// b_n generally lies in K^(1/q) rather than K; the relation it appears in is
/// only K-rational after one twist, so `bn_q` holds b_n^q.  `b` holds
/// b_1..b_{n-1}, followed by b_n when that q-th root exists in K.
struct StructureCoeffs {
    int n = 0;
    std::vector<BaseElement> a, b, yc, zc;
    BaseElement bn_q;
    std::optional<BaseElement> bn;
};

/// a_i by closed form and by linear extraction (both must agree), y_i and
/// z_i by triangular extraction, b_i from the h-relation; every defining
/// relation is verified exactly.
StructureCoeffs structure_coeffs(const MotiveBasis& basis, const ShtukaData& sh);

/// (2 eta + c1 theta + c3) / (theta - t([i]V^(1) + [n-i]V)).  Equals a_i for
/// 1 <= i <= n-1; at i = n the quotient g_{n+2}/g_{n+1} = (g_2/g_1)^(1)
/// vanishes at Xi^(1) rather than Xi and the formula does not apply.
BaseElement a_uniform_formula(const ShtukaData& sh, int n, int i);

/// Closed form for a_i: the uniform formula for i < n, and for i = n
///   (eta + eta^q + c1 theta + c3 + l^q (theta - theta^q)) / (theta - t([n]V)^q),
/// l the slope through Xi and [1]V^(1) + [n-1]V.
BaseElement a_closed_form(const ShtukaData& sh, int n, int i);

/// Decomposition g = sum_j sigma^j( sum_i e_{i,j} h_i ), sigma(h) = f^n h^(-1).
///
/// Coefficients are stored in twisted-up form: e_{i,j} = d_{i,j}^(j), where
/// g = sum d_{i,j} sigma^j(h_i).  The e_{i,j} always lie in K even when the
/// d_{i,j} do not.
struct SigmaDecomposition {
    int n = 0;
    /// levels[j][i-1] = e_{i,j}.
    std::vector<std::vector<BaseElement>> levels;
};

/// Membership in N: polynomial in (t, y) and vanishing to order >= n at V^(1).
bool in_N(const CurveFunction& g, const ShtukaData& sh, int n);

/// Local data used by sigma_decompose: Taylor coefficients of h_i at Xi.
struct SigmaContext {
    const MotiveBasis* basis = nullptr;
    const ShtukaData* sh = nullptr;
    std::vector<std::vector<BaseElement>> h_taylor;  // h_taylor[i-1][s], s < n
    CurveFunction fn;                                 // f^n
};
SigmaContext make_sigma_context(const MotiveBasis& basis, const ShtukaData& sh);

SigmaDecomposition sigma_decompose(const CurveFunction& g, const SigmaContext& ctx);
SigmaDecomposition sigma_decompose(const CurveFunction& g, const MotiveBasis& basis, const ShtukaData& sh);

/// Reassemble in twisted-up form and compare with g^(J), J = depth - 1.
bool sigma_reassembles(const CurveFunction& g, const SigmaDecomposition& dec, const MotiveBasis& basis,
                       const ShtukaData& sh);

/// epsilon(g) = sum_j reversed(e_{., j}).
std::vector<BaseElement> epsilon(const SigmaDecomposition& dec);

}  // namespace drinfeld
