#pragma once

#include <climits>
#include <string>
#include <vector>

#include "drinfeld/anderson.hpp"
#include "drinfeld/laurent.hpp"
#include "drinfeld/matrix.hpp"
#include "drinfeld/shtuka.hpp"

namespace drinfeld {

/// Truncation knobs for every series computation.  `local_terms` == 0 means
/// the default n + 8 for an n-dimensional run.
struct TruncationPolicy {
    int u_prec = 64;
    int local_terms = 0;
    int product_cap = 64;
    int exp_terms = 6;

    void validate() const;
    int local_terms_for(int n) const { return local_terms > 0 ? local_terms : n + 8; }
    /// Relative precision for embedding K elements: u_prec plus a fixed guard.
    int working_prec() const { return u_prec + 8; }
    /// Relative precision for data entering local expansions at Xi; the
    /// extra room absorbs the cancellation in products of expansions whose
    /// coefficients shrink with the order.
    int local_prec(int terms) const { return working_prec() + 8 * terms; }
};

/// An element of K_infinity = F_q((u)), u = theta / eta, times xi^(k/(q-1)).
///
/// The tag `xi_num` = k records a fractional power of xi that is never
/// expanded.  Series with different tags may not be added; products add
/// tags.  `retag` moves integer powers of xi between the tag and the series.
///
/// The exact zero (no precision limit) is distinct from a series that is
/// zero to its known precision; only the former reports `is_zero()`.
class InfSeries {
public:
    InfSeries() = default;
    /// The exact zero carrying a tag (used as the additive identity).
    static InfSeries exact_zero(const FiniteField* F, int xi_num = 0);
    /// A constant of F_q known modulo u^abs_prec.
    static InfSeries constant(const FiniteField* F, uint8_t c, int abs_prec, int xi_num = 0);
    static InfSeries from_series(Laurent<Fq> s, int xi_num = 0);

    const FiniteField* field() const { return F_; }
    bool is_exact_zero() const { return exact_; }
    /// Laurent coefficient interface: true only for the exact zero.
    bool is_zero() const { return exact_; }
    bool is_zero_to_precision() const { return exact_ || s_.is_zero_to_precision(); }
    /// Exponent of the first known nonzero coefficient (abs_prec() if none,
    /// INT_MAX for the exact zero).
    int leading_exp() const;
    int abs_prec() const { return exact_ ? INT_MAX : s_.prec(); }
    /// Number of known coefficients from the leading one.
    int rel_prec() const { return exact_ ? INT_MAX : abs_prec() - leading_exp(); }
    int xi_num() const { return xi_num_; }
    const Laurent<Fq>& series() const { return s_; }
    /// Coefficient of u^k (k < abs_prec()).
    Fq coeff(int k) const;

    InfSeries zero_like() const { return exact_zero(F_, xi_num_); }
    InfSeries operator-() const;
    friend InfSeries operator+(const InfSeries& a, const InfSeries& b) { return add(a, b, false); }
    friend InfSeries operator-(const InfSeries& a, const InfSeries& b) { return add(a, b, true); }
    friend InfSeries operator*(const InfSeries& a, const InfSeries& b);
    friend InfSeries operator/(const InfSeries& a, const InfSeries& b) { return a * b.inv(); }
    InfSeries inv() const;
    InfSeries pow(long long e) const;
    InfSeries truncated(int abs_prec) const;
    InfSeries with_rel_prec(int rel) const;
    /// Scaling by an F_q constant.
    InfSeries scaled(uint8_t c) const;

    /// Equality of known coefficients over the common precision, tags equal.
    friend bool operator==(const InfSeries& a, const InfSeries& b);
    friend bool operator!=(const InfSeries& a, const InfSeries& b) { return !(a == b); }

private:
    static InfSeries add(const InfSeries& a, const InfSeries& b, bool subtract);

    const FiniteField* F_ = nullptr;
    bool exact_ = false;
    Laurent<Fq> s_;
    int xi_num_ = 0;
};

/// Number of coefficients, counted from the leading exponent of `reference`,
/// on which a and b agree (stopping at the first mismatch or the end of the
/// common precision).
int agreeing_coeffs(const InfSeries& a, const InfSeries& b, int reference_exp);

/// `xi^(k/(q-1)) * u^(e) * (c_0 + c_1 u + ... + O(u^r))`, r relative.
std::string to_string(const InfSeries& s);

/// Expansion of x at infinity with `rel` known coefficients.
InfSeries embed(const BaseElement& x, int rel);
InfSeries embed(const BaseElement& x, const TruncationPolicy& policy);
/// x^(q^k): exponents scaled by q^k (F_q coefficients are fixed by the
/// q-power map) and the tag multiplied by q^k.
InfSeries series_twist(const InfSeries& s, int k);
inline InfSeries twist(const InfSeries& s, int k) { return series_twist(s, k); }

/// Moves (tag - new_tag)/(q - 1) integer powers of xi into the series;
/// `xi` is the embedded untagged xi.  Throws InconsistencyError when the
/// tag difference is not a multiple of q - 1.
InfSeries retag(const InfSeries& s, int new_tag, const InfSeries& xi);

/// -v(x): larger means bigger.  INT_MIN for the exact zero.
int norm_exponent(const InfSeries& s);

/// Laurent series in t - theta with K_infinity coefficients.
using LocalExpansion = Laurent<InfSeries>;
using InfVector = std::vector<InfSeries>;

/// Embedded constants of a shtuka, shared by the analytic routines.
struct InfinityData {
    const ShtukaData* sh = nullptr;
    TruncationPolicy policy;
    int W = 0;   // relative precision for embedded K elements
    int WL = 0;  // relative precision of the constants below and of local data
    InfSeries theta, eta, xi, m, alpha;
    /// y near Xi as a series in t - theta, and t itself.
    LocalExpansion Y, T;
    int local_terms = 0;
};
InfinityData make_infinity_data(const ShtukaData& sh, const TruncationPolicy& policy, int local_terms);

/// Embeds the K coefficients of an exact expansion.
LocalExpansion embed_expansion(const Laurent<BaseElement>& e, int rel);
/// The constant c as a local expansion with `terms` coefficients.
LocalExpansion local_constant(const InfSeries& c, int terms);
/// Coefficient-wise retag of a local expansion.
LocalExpansion retag(const LocalExpansion& e, int new_tag, const InfSeries& xi);
/// True when every coefficient in the common window agrees and is known to
/// at least `rel` u-coefficients past its leading exponent.
bool expansions_agree(const LocalExpansion& a, const LocalExpansion& b, int rel);

/// The product formula for pi_rho, tagged xi^(q/(q-1)); the untagged part is
///   -1/(theta^q - alpha) prod_{i>=1} (1 - theta/alpha^(q^i)) /
///       (1 - (m/(m theta - eta))^(q^i) theta + (1/(m theta - eta))^(q^i) eta).
/// Throws PrecisionError when product_cap factors do not stabilise.
struct ProductResult {
    InfSeries value;
    int factors = 0;
};
ProductResult pi_rho(const InfinityData& inf);

/// omega_rho^n expanded at Xi, tagged xi^(n/(q-1)), from factors
/// (xi^(q^i)/f^(i))^n for i >= start.  start = 0 is omega_rho^n itself;
/// start = 1 is (omega_rho^n)^(1) with its tag n q.
struct OmegaResult {
    LocalExpansion value;
    int factors = 0;
};
OmegaResult omega_product(const InfinityData& inf, int n, int start);
LocalExpansion omega_at_Xi(const InfinityData& inf, int n);

/// -Res_Xi(omega_rho lambda), tagged xi^(1/(q-1)): the period of the rank-1
/// module obtained from the residue rather than the product formula.
InfSeries pi_rho_residue(const InfinityData& inf);

/// T(w): coordinate i is w times the expansion of g_i at Xi.
std::vector<LocalExpansion> T_map(const LocalExpansion& w, const MotiveBasis& basis, const InfinityData& inf);

/// Expansion of lambda / dt = 1 / (2y + c1 t + c3) at Xi.
LocalExpansion lambda_factor(const InfinityData& inf);
/// Coefficients of (t - theta)^-1 in v_i * lambda/dt.
InfVector RES_Xi(const std::vector<LocalExpansion>& v, const InfinityData& inf);

struct PeriodResult {
    InfVector Pi;              // Pi_n = -RES_Xi(T(omega_rho^n)), tag n
    InfSeries pi;              // pi_rho from the product formula, tag q
    InfSeries pi_residue;      // -Res_Xi(omega_rho lambda), tag 1
    InfSeries ratio;           // Pi_n[last] / pi^n with the xi power resolved
    int ratio_xi_power = 0;    // the integer power of xi absorbed (-n)
    InfSeries ratio_residue;   // Pi_n[last] / pi_residue^n (tags cancel)
    int omega_factors = 0, pi_factors = 0;
    /// Candidates for the ratio in K: g_1(Xi)/(a_1...a_{n-1}) and
    /// (-1)^(n+1) w^(n-1) g_1(Xi)/(a_1...a_{n-1}), w = 2 eta + c1 theta + c3,
    /// the latter keeping the residue of lambda at the pole of order n.
    BaseElement theorem_value, residue_value;
    /// Agreeing u-coefficients: ratio vs theorem_value, ratio_residue vs
    /// theorem_value, ratio_residue vs residue_value.
    int theorem_agree = 0, theorem_agree_residue = 0, residue_agree = 0;
};
PeriodResult period_vector(const AndersonModule& M, const MotiveBasis& basis, const InfinityData& inf);

/// Embedded matrices.
using InfMatrix = DenseMatrix<InfSeries>;
InfMatrix embed(const KMatrix& m, int rel, const FiniteField* F);
InfVector mat_vec(const InfMatrix& m, const InfVector& v);
InfVector twist(const InfVector& v, int k);
/// max over coordinates of norm_exponent; INT_MIN when all are exact zeros.
int norm_exponent(const InfVector& v);

/// Exp coefficients Q_0..Q_J embedded once.
struct EmbeddedExp {
    std::vector<InfMatrix> Q;
    InfMatrix dtheta, deta;
    std::vector<InfMatrix> rho_t;  // A_0 = d[theta], A_1, ...
};
EmbeddedExp embed_exp(const AndersonModule& M, const ExpLogCoeffs& c, const InfinityData& inf);

struct ExpEval {
    InfVector value;
    /// norm exponents of the terms Q_i z^(i), i = 0..terms.
    std::vector<int> term_norms;
    /// Increments S_i - S_{i-1} (i >= 1) have strictly decreasing norms.
    bool increments_decreasing = false;
    int last_term_norm = INT_MIN;
};
/// Partial sum sum_{i<=terms} Q_i z^(i); tagged inputs are retagged term by
/// term back to the tag of z.
ExpEval exp_eval(const EmbeddedExp& X, const InfVector& z, int terms, const InfinityData& inf);

/// rho_t(x) = sum_k A_k x^(k) with the embedded A_k, retagged to the tag of x.
InfVector rho_t_apply(const EmbeddedExp& X, const InfVector& x, const InfinityData& inf);

/// Exp(d[theta] z) - rho_t(Exp z) with `terms` terms of each Exp.  By the
/// coefficient recursion every included order cancels, leaving minus the
/// A_k-images of the top terms; `tail_norm` is the norm of that remainder
/// computed directly, `residual_norm` the norm of the difference itself.
struct FunctionalResidual {
    int residual_norm = INT_MIN;
    int tail_norm = INT_MIN;
};
FunctionalResidual exp_functional_residual(const EmbeddedExp& X, const InfVector& z, int terms,
                                           const InfinityData& inf);

/// Vector Anderson generating functions for u in K_infinity^n.
struct GenFn {
    /// E_u as a power series in t: E_t[i] is the t^i coefficient vector.
    std::vector<InfVector> E_t;
    /// G_u = E_{d[eta]u} + (y + c1 t + c3) E_u split as b(t) + y c(t).
    std::vector<InfVector> G_b, G_c;
    /// Coordinates of G_u expanded at Xi.
    std::vector<LocalExpansion> G_at_Xi;
    /// Truncation bound: the largest norm exponent among the last included
    /// terms Q_J (...) u^(J) and their images A_k (...)^(k) under the tau-part
    /// of rho_t that land beyond order J.
    int tail_norm = INT_MIN;
};
GenFn anderson_gen_fn(const AndersonModule& M, const EmbeddedExp& X, const InfVector& u, int t_terms,
                      const InfinityData& inf);

/// D_t(G_u) - Exp(d[eta]u) - (y + c1 t + c3) Exp(u) on the t^0..t^(t_terms-2)
/// coefficients of both the 1 and y parts; returns its norm exponent.
int dt_gu_residual_norm(const AndersonModule& M, const EmbeddedExp& X, const GenFn& G, const InfVector& u,
                        const InfinityData& inf);

/// (d[eta] - y)(d[theta] - t)^-1 expanded at Xi, entry-wise.
std::vector<std::vector<LocalExpansion>> coord_regular_matrix(const AndersonModule& M, const InfinityData& inf);

}  // namespace drinfeld
