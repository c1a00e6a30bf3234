#include "drinfeld/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace drinfeld {

bool CheckGroup::all_pass() const { return failures() == 0; }

int CheckGroup::failures() const {
    int k = 0;
    for (const auto& c : checks)
        if (!c.pass) ++k;
    return k;
}

namespace {

CurveFunction cst(const BaseElement& c) { return CurveFunction::constant(c); }

void add(CheckGroup& g, std::string name, bool pass, std::string detail = {}) {
    IdentityCheck c;
    c.name = std::move(name);
    c.pass = pass;
    c.detail = std::move(detail);
    g.checks.push_back(std::move(c));
}

/// First (t - theta)-exponent whose coefficient is known to be nonzero.
int leading_order(const LocalExpansion& e) {
    for (int k = e.val(); k < e.prec(); ++k)
        if (!e.coeff(k).is_zero_to_precision()) return k;
    return e.prec();
}

KOperator kconst(const BaseElement& c, int n) { return KOperator::constant(KMatrix::scalar(n, c)); }

class Sampler {
public:
    Sampler(const CurvePtr& E, uint64_t seed) : E_(E), rng_(seed) {}

    uint8_t fq() { return static_cast<uint8_t>(rng_() % static_cast<uint64_t>(E_->q())); }
    uint8_t fq_nonzero() { return static_cast<uint8_t>(1 + rng_() % static_cast<uint64_t>(E_->q() - 1)); }

    /// c0 + c1 theta + c2 eta with random F_q coefficients.
    BaseElement small_k() {
        return BaseElement::constant(E_, fq()) + BaseElement::theta(E_).scaled(fq()) +
               BaseElement::eta(E_).scaled(fq());
    }

    /// Random polynomial in (t, y) of degree <= deg (deg t = 2, deg y = 3)
    /// with small K coefficients.
    CurveFunction poly(int deg) {
        CurveFunction r = CurveFunction::zero(E_);
        const CurveFunction t = CurveFunction::t(E_), y = CurveFunction::y(E_);
        for (int b = 0; b <= 1; ++b)
            for (int a = 0; 2 * a + 3 * b <= deg; ++a) {
                CurveFunction m = cst(small_k());
                for (int k = 0; k < a; ++k) m = m * t;
                if (b) m = m * y;
                r = r + m;
            }
        return r;
    }

    /// Random element of the ideal of polynomials vanishing to order >= n at
    /// P = (x0, y0): sum_a r_a (t - x0)^a (y - y0)^(n-a), of degree <= 4n.
    CurveFunction in_ideal_power(const CurvePoint& P, int n) {
        const CurveFunction t = CurveFunction::t(E_), y = CurveFunction::y(E_);
        const CurveFunction lt = t - cst(P.x), ly = y - cst(P.y);
        for (;;) {
            CurveFunction g = CurveFunction::zero(E_);
            for (int a = 0; a <= n; ++a) g = g + poly(n + a) * lt.pow(a) * ly.pow(n - a);
            if (!g.is_zero()) return g;
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    CurvePtr E_;
    std::mt19937_64 rng_;
};

std::vector<BaseElement> eps_of(const CurveFunction& g, const SigmaContext& ctx) {
    return epsilon(sigma_decompose(g, ctx));
}

std::vector<BaseElement> vec_add(std::vector<BaseElement> a, const std::vector<BaseElement>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] + b[i];
    return a;
}

bool all_zero(const std::vector<BaseElement>& v) {
    return std::all_of(v.begin(), v.end(), [](const BaseElement& x) { return x.is_zero(); });
}

std::string frac(int k, int n) { return std::to_string(k) + "/" + std::to_string(n); }

}  // namespace

CheckGroup shtuka_identities(const ShtukaData& sh, const MotiveBasis& basis, const StructureCoeffs& sc) {
    const int n = basis.n;
    const CurvePtr& E = sh.curve;
    const CurveFunction t = CurveFunction::t(E), y = CurveFunction::y(E);
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    CheckGroup g{"basis and structure constants", {}};
    auto G = [&](int i) { return i <= n ? basis.g[i - 1] : extend_basis(basis, sh, BasisKind::g, i); };

    bool tr = true, yr = true, hr = true, closed = true;
    for (int i = 1; i <= n; ++i) {
        tr = tr && (t - cst(th)) * G(i) == G(i + 1).scaled(sc.a[i - 1]) + G(i + 2);
        yr = yr && (y - cst(et)) * G(i) == G(i + 1).scaled(sc.yc[i - 1]) + G(i + 2).scaled(sc.zc[i - 1]) + G(i + 3);
        const BaseElement bq = i < n ? sc.b[i - 1].twist(1) : sc.bn_q;
        const CurveFunction hi = twisted_h(basis, sh, i, 1), h1 = twisted_h(basis, sh, i + 1, 1),
                            h2 = twisted_h(basis, sh, i + 2, 1);
        hr = hr && (t - cst(th.twist(1))) * hi == h1.scaled(bq) + h2;
        closed = closed && a_closed_form(sh, n, i) == sc.a[i - 1];
    }
    add(g, "t g_i = theta g_i + a_i g_{i+1} + g_{i+2} for 1 <= i <= n", tr);
    add(g, "y g_i = eta g_i + y_i g_{i+1} + z_i g_{i+2} + g_{i+3} for 1 <= i <= n", yr);
    add(g, "t h_i = theta h_i + b_i h_{i+1} + h_{i+2} for 1 <= i <= n (after one twist)", hr);
    add(g, "closed form of a_i equals the extracted a_i for 1 <= i <= n", closed);

    bool ab = true;
    for (int j = 1; j <= n - 1; ++j) ab = ab && sc.a[j - 1] == sc.b[n - j - 1];
    add(g, "a_j = b_{n-j} for 1 <= j <= n-1", ab);
    add(g, "a_n = b_n^q", sc.a[n - 1] == sc.bn_q);

    // g_1 h_1^(-1) = t - t([n]V); twisted once when h_1^(-1) leaves K.
    const CurvePoint nV = basis_point(sh, n, 0);
    bool d1 = false;
    std::string how;
    try {
        const CurveFunction h1m = basis.h[0].twist(-1);
        d1 = basis.g[0] * h1m == t - cst(nV.x);
        how = "checked directly";
    } catch (const InconsistencyError&) {
        d1 = basis.g[0].twist(1) * basis.h[0] == t - cst(nV.x.twist(1));
        how = "checked as g_1^(1) h_1 = t - t([n]V)^q";
    }
    add(g, "g_1 h_1^(-1) = t - t([n]V)", d1, how);
    bool d2 = true;
    const CurveFunction fn = sh.f.pow(n);
    for (int j = 1; j <= n - 1; ++j)
        d2 = d2 && basis.g[j] * basis.h[n - j] == fn * (t - cst(basis_point(sh, n, j).x));
    add(g, "g_{j+1} h_{n-(j-1)} = f^n (t - t([j]V^(1) + [n-j]V)) for 1 <= j <= n-1", d2);
    return g;
}

CheckGroup module_identities(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh) {
    const int n = M.n;
    const CurvePtr& E = sh.curve;
    const CurveParams& c = E->params();
    CheckGroup g{"Anderson module", {}};
    add(g, "rho_t rho_y = rho_y rho_t", M.rho_t * M.rho_y == M.rho_y * M.rho_t);
    auto K = [&](uint8_t v) { return kconst(BaseElement::constant(E, v), n); };
    const KOperator lhs = M.rho_y * M.rho_y + K(c.c1.v) * M.rho_t * M.rho_y + K(c.c3.v) * M.rho_y;
    const KOperator t2 = M.rho_t * M.rho_t;
    const KOperator rhs = t2 * M.rho_t + K(c.c2.v) * t2 + K(c.c4.v) * M.rho_t + K(c.c6.v);
    add(g, "rho_y^2 + c1 rho_t rho_y + c3 rho_y = rho_t^3 + c2 rho_t^2 + c4 rho_t + c6", lhs == rhs);
    if (n >= 2) add(g, "rho_t equals the closed banded form", M.rho_t == closed_rho_t(M.coeffs, E));
    if (n >= 3) add(g, "rho_y equals the closed banded form", M.rho_y == closed_rho_y(M.coeffs, E));
    const AElement ty{{}, {0, 1}};
    add(g, "d[t y] = d[t] d[y]", d_of(M, ty) == M.dtheta() * M.deta());
    if (n >= 2) {
        const OperatorReport rep = operator_suite(M, basis, sh);
        for (const IdentityCheck& chk : rep.checks) g.checks.push_back(chk);
    }
    return g;
}

CheckGroup epsilon_diagram(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh, int samples,
                           uint64_t seed) {
    const int n = M.n;
    const CurvePtr& E = sh.curve;
    const SigmaContext ctx = make_sigma_context(basis, sh);
    const CurveFunction t = CurveFunction::t(E), y = CurveFunction::y(E);
    const CurveFunction fn = sh.f.pow(n);
    const CurvePoint V1 = sh.V.twist(1);
    Sampler S(E, seed);
    int ok_t = 0, ok_y = 0, ok_lin = 0, ok_ker = 0, in_n = 0;
    for (int s = 0; s < samples; ++s) {
        const CurveFunction g1 = S.in_ideal_power(V1, n);
        const CurveFunction g2 = S.in_ideal_power(V1, n);
        if (in_N(g1, sh, n) && g1.degree() <= 4 * n) ++in_n;
        const auto e1 = eps_of(g1, ctx), e2 = eps_of(g2, ctx);
        if (eps_of(t * g1, ctx) == M.rho_t.apply(e1)) ++ok_t;
        if (eps_of(y * g1, ctx) == M.rho_y.apply(e1)) ++ok_y;
        if (eps_of(g1 + g2, ctx) == vec_add(e1, e2)) ++ok_lin;
        const CurveFunction h = S.in_ideal_power(sh.V, n);
        if (all_zero(eps_of(h.twist(1) - fn * h, ctx))) ++ok_ker;
    }
    CheckGroup g{"epsilon diagram", {}};
    add(g, "sampled g lie in N with deg g <= 4n", in_n == samples, frac(in_n, samples));
    add(g, "eps(t g) = rho_t(eps(g))", ok_t == samples, frac(ok_t, samples));
    add(g, "eps(y g) = rho_y(eps(g))", ok_y == samples, frac(ok_y, samples));
    add(g, "eps(g + g') = eps(g) + eps(g')", ok_lin == samples, frac(ok_lin, samples));
    add(g, "eps(h^(1) - f^n h) = 0 for h vanishing to order n at V", ok_ker == samples, frac(ok_ker, samples));
    return g;
}

CheckGroup exp_log_identities(const AndersonModule& M, const ExpLogCoeffs& c) {
    const int n = M.n;
    const int J = static_cast<int>(c.Q.size()) - 1;
    const CurvePtr& E = M.dtheta().zero().curve();
    const KMatrix I = KMatrix::identity(n, BaseElement::zero(E));
    CheckGroup g{"Exp and Log", {}};
    add(g, "Q_0 = P_0 = I", c.Q[0] == I && c.P[0] == I);
    bool comp = true;
    for (int m = 0; m <= J; ++m) {
        KMatrix s(n, n, BaseElement::zero(E));
        for (int i = 0; i <= m; ++i) s += c.Q[i] * twist(c.P[m - i], i);
        comp = comp && s == (m == 0 ? I : KMatrix(n, n, BaseElement::zero(E)));
    }
    add(g, "sum_i Q_i (sum_j P_j z^(j))^(i) = z through tau-order " + std::to_string(J), comp);
    bool tq = true, yq = true;
    for (int i = 1; i <= J; ++i) {
        tq = tq && exp_residual(M.rho_t, c.Q, i).is_zero();
        yq = yq && exp_residual(M.rho_y, c.Q, i).is_zero();
    }
    add(g, "Exp(d[t] z) = rho_t(Exp z) coefficientwise through order " + std::to_string(J), tq);
    add(g, "Exp(d[y] z) = rho_y(Exp z) coefficientwise through order " + std::to_string(J), yq);
    return g;
}

std::vector<InfVector> sample_small_vectors(const CurvePtr& E, int n, int count, uint64_t seed,
                                            const InfinityData& inf) {
    Sampler S(E, seed);
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const BaseElement den = th.pow(4) * et;
    std::vector<InfVector> out;
    for (int s = 0; s < count; ++s) {
        InfVector u;
        for (int c = 0; c < n; ++c) {
            BaseElement num;
            do {
                num = BaseElement::constant(E, S.fq()) + th.scaled(S.fq()) + th.pow(2).scaled(S.fq()) +
                      et.scaled(S.fq());
            } while (num.is_zero());
            u.push_back(embed(num / den, inf.W));
        }
        out.push_back(std::move(u));
    }
    return out;
}

bool negligible(int norm, int tail, const TruncationPolicy& policy) { return norm <= std::max(tail, -policy.u_prec); }

CheckGroup analytic_identities(const AndersonModule& M, const MotiveBasis& basis, const ShtukaData& sh,
                               const ExpLogCoeffs& c, const TruncationPolicy& policy, const AnalyticOptions& opt) {
    const int n = M.n;
    const InfinityData inf = make_infinity_data(sh, policy, policy.local_terms_for(n));
    const int J = std::min(policy.exp_terms, static_cast<int>(c.Q.size()) - 1);
    CheckGroup g{"series identities", {}};
    std::ostringstream d;

    const ProductResult pr = pi_rho(inf);
    const InfSeries pres = pi_rho_residue(inf);
    const int pa = agreeing_coeffs(retag(pres, pr.value.xi_num(), inf.xi), pr.value, pr.value.leading_exp());
    add(g, "product formula for pi_rho equals -Res_Xi(omega_rho lambda)", pa >= opt.period_agree,
        std::to_string(pa) + " coefficients agree");

    const OmegaResult om = omega_product(inf, n, 0);
    add(g, "omega_rho^n has leading order -n at Xi", leading_order(om.value) == -n,
        "order " + std::to_string(leading_order(om.value)));
    const OmegaResult om1 = omega_product(inf, n, 1);
    const LocalExpansion fexp = embed_expansion(expand_at_point(sh.f, CurvePoint::xi(sh.curve), inf.local_terms), inf.WL);
    LocalExpansion rhs = om.value;
    for (int k = 0; k < n; ++k) rhs = rhs * fexp;
    add(g, "(omega_rho^n)^(1) = f^n omega_rho^n at Xi",
        expansions_agree(retag(om1.value, n, inf.xi), rhs, policy.u_prec),
        std::to_string(inf.local_terms) + " local coefficients");

    const auto T = T_map(om.value, basis, inf);
    bool profile = true;
    for (int i = 1; i <= n; ++i) profile = profile && leading_order(T[i - 1]) == -(n - i + 1);
    add(g, "T(omega_rho^n) has pole orders n, n-1, ..., 1", profile);

    const PeriodResult P = period_vector(M, basis, inf);
    bool tags = true;
    for (const InfSeries& x : P.Pi) tags = tags && x.xi_num() == n;
    add(g, "Pi_n carries the tag xi^(n/(q-1)) and Pi_n[last]/pi_rho^n leaves xi^" + std::to_string(-n),
        tags && P.ratio_xi_power == -n);
    add(g, "Pi_n[last]/pi_rho^n = g_1(Xi)/(a_1...a_{n-1}) with the product formula for pi_rho",
        P.theorem_agree >= opt.period_agree, std::to_string(P.theorem_agree) + " coefficients agree");
    add(g, "Pi_n[last]/pi^n = g_1(Xi)/(a_1...a_{n-1}) with pi = -Res_Xi(omega_rho lambda)",
        P.theorem_agree_residue >= opt.period_agree, std::to_string(P.theorem_agree_residue) + " coefficients agree");
    add(g, "Pi_n[last]/pi^n = (-1)^(n+1) w^(n-1) g_1(Xi)/(a_1...a_{n-1}) with pi = -Res_Xi(omega_rho lambda)",
        P.residue_agree >= opt.period_agree, std::to_string(P.residue_agree) + " coefficients agree");

    const EmbeddedExp X = embed_exp(M, c, inf);
    const auto us = sample_small_vectors(sh.curve, n, opt.samples, opt.seed, inf);
    int res_ok = 0, dt_ok = 0, shift_ok = 0, fe_ok = 0, min_agree = INT_MAX, worst_tail = INT_MIN;
    int worst_dt = INT_MIN;
    for (const InfVector& u : us) {
        const GenFn G = anderson_gen_fn(M, X, u, 4, inf);
        const InfVector r = RES_Xi(G.G_at_Xi, inf);
        int agree = INT_MAX;
        for (int k = 0; k < n; ++k) agree = std::min(agree, agreeing_coeffs(r[k], -u[k], u[k].leading_exp()));
        min_agree = std::min(min_agree, agree);
        worst_tail = std::max(worst_tail, G.tail_norm);
        if (agree >= opt.min_agree) ++res_ok;
        const int dres = dt_gu_residual_norm(M, X, G, u, inf);
        worst_dt = std::max(worst_dt, dres);
        if (negligible(dres, G.tail_norm, policy)) ++dt_ok;
        const InfVector du = mat_vec(X.dtheta, u);
        const InfVector rs = RES_Xi(anderson_gen_fn(M, X, du, 1, inf).G_at_Xi, inf);
        const InfVector dr = mat_vec(X.dtheta, r);
        int sa = INT_MAX;
        for (int k = 0; k < n; ++k) sa = std::min(sa, agreeing_coeffs(rs[k], dr[k], dr[k].leading_exp()));
        if (sa >= opt.min_agree) ++shift_ok;
        const FunctionalResidual fr = exp_functional_residual(X, u, J, inf);
        if (negligible(fr.residual_norm, fr.tail_norm, policy)) ++fe_ok;
    }
    const int S = opt.samples;
    add(g, "RES_Xi(G_u) = -u for sampled u", res_ok == S,
        frac(res_ok, S) + ", min agreement " + std::to_string(min_agree) + " coefficients, tail |.| = q^" +
            std::to_string(worst_tail));
    add(g, "D_t(G_u) = Exp(d[eta]u) + (y + c1 t + c3) Exp(u) to truncation", dt_ok == S,
        frac(dt_ok, S) + ", worst residual |.| = q^" + std::to_string(worst_dt));
    add(g, "RES_Xi(G_{d[theta]u}) = d[theta] RES_Xi(G_u)", shift_ok == S, frac(shift_ok, S));
    add(g, "Exp(d[theta] z) - rho_t(Exp z) is within the truncation tail", fe_ok == S, frac(fe_ok, S));

    const auto CR = coord_regular_matrix(M, inf);
    bool reg = true;
    for (const auto& row : CR)
        for (const auto& e : row) reg = reg && leading_order(e) >= 0;
    add(g, "(d[eta] - y)(d[theta] - t)^-1 is regular at Xi", reg);

    const ExpEval ev = exp_eval(X, P.Pi, J, inf);
    d.str("");
    d << "term norms";
    for (int tn : ev.term_norms) d << ' ' << tn;
    d << ", |Exp(Pi_n)| = q^" << norm_exponent(ev.value);
    add(g, "Exp(Pi_n): norms of the increments Q_i Pi_n^(i), i >= 1, strictly decrease", ev.increments_decreasing,
        d.str());
    return g;
}

}  // namespace drinfeld
