#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drinfeld/analytic.hpp"
#include "drinfeld/anderson.hpp"
#include "drinfeld/shtuka.hpp"

namespace drinfeld {

/// A named group of identity checks.
struct CheckGroup {
    std::string name;
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
    int failures() const;
};

/// Exact identities of the bases and their structure constants:
///   t g_i = theta g_i + a_i g_{i+1} + g_{i+2},
///   y g_i = eta g_i + y_i g_{i+1} + z_i g_{i+2} + g_{i+3},
///   t h_i = theta h_i + b_i h_{i+1} + h_{i+2} (twisted once),
/// the closed form of a_i against the extracted value, a_j = b_{n-j},
/// a_n = b_n^q, and the two duality identities between g and h.
CheckGroup shtuka_identities(const ShtukaData& sh, const MotiveBasis& basis, const StructureCoeffs& sc);

/// Commutation, the Weierstrass relation on rho, the closed banded forms
/// (n >= 3), d[ty] = d[t] d[y], and every entry of operator_suite.
CheckGroup module_identities(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh);

/// Random g in N and h vanishing to order n at V, drawn deterministically
/// from `seed`: eps(t g) = rho_t(eps(g)), eps(y g) = rho_y(eps(g)),
/// eps(h^(1) - f^n h) = 0, and eps(g + g') = eps(g) + eps(g').
/// deg g <= 4n by construction.
CheckGroup epsilon_diagram(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh, int samples,
                           uint64_t seed);

/// sum_{i+j=m} Q_i P_j^(i) = [m = 0] I through order J, Q_0 = P_0 = I, and
/// the y-compatibility of every Q_i.
CheckGroup exp_log_identities(const AndersonModule& M, const ExpLogCoeffs& c);

/// Sampled u in K^n of degree <= -6 (embedded), deterministic in `seed`.
std::vector<InfVector> sample_small_vectors(const CurvePtr& E, int n, int count, uint64_t seed,
                                            const InfinityData& inf);

/// A residual counts as negligible when its norm exponent is at most
/// max(tail, -u_prec): below the truncation tail or below the precision kept.
bool negligible(int norm, int tail, const TruncationPolicy& policy);

/// Series checks at the infinite place and at Xi:
///   pi_rho against -Res(omega_rho lambda); omega functional equation;
///   pole profile of T(omega^n); period ratio against both closed forms;
///   RES(G_u) = -u, the D_t residual and the residue shift law for sampled u;
///   coordinate regularity; Exp(Pi_n) term decay; Exp functional equation.
struct AnalyticOptions {
    int samples = 10;
    uint64_t seed = 1;
    int min_agree = 20;      // coefficients demanded in RES(G_u) = -u
    int period_agree = 40;   // coefficients demanded in the period comparisons
};
CheckGroup analytic_identities(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh,
                               const ExpLogCoeffs& c, const TruncationPolicy& policy, const AnalyticOptions& opt);

}  // namespace drinfeld
