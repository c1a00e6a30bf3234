#include "drinfeld/shtuka.hpp"

#include <string>

namespace drinfeld {

namespace {

BaseElement lift(const CurvePtr& E, uint8_t c) { return BaseElement::constant(E, c); }

CurveFunction cst(const BaseElement& c) { return CurveFunction::constant(c); }

// c_0 + c_1 x + ... for x = t - theta at Xi, coefficients 0..N-1 (g polynomial).
std::vector<BaseElement> taylor_at(const CurveFunction& g, const CurvePoint& P, int N) {
    std::vector<BaseElement> out(N, BaseElement::zero(g.curve()));
    if (g.is_zero()) return out;
    const Laurent<BaseElement> s = expand_at_point(g, P, N);
    if (s.val() < 0) throw InvalidInput("function has a pole at the expansion point");
    for (int k = s.val(); k < N; ++k) out[k] = s.coeff(k);
    return out;
}

// f^(e) for any integer e; negative e requires exact q-th roots.
CurveFunction f_twist(const ShtukaData& sh, int e) { return sh.f.twist(e); }

// Split i >= 1 as jn + k with 1 <= k <= n.
std::pair<int, int> split_index(int i, int n) {
    const int j = (i - 1) / n;
    return {j, i - j * n};
}

}  // namespace

CurvePoint solve_drinfeld_divisor(const CurvePtr& E) {
    if (E->count_fq_points() != 1)
        throw InvalidInput("solve_drinfeld_divisor: #E(F_q) = " + std::to_string(E->count_fq_points()) +
                           " (class number must be 1)");
    const int q = E->q();
    const CurvePoint Xi = CurvePoint::xi(E);
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    for (int c = 0; c < q; ++c) {
        const BaseElement alpha = th + lift(E, static_cast<uint8_t>(c));
        for (int d = 0; d < q; ++d) {
            for (int e = 0; e < q; ++e) {
                const BaseElement beta =
                    et + th * lift(E, static_cast<uint8_t>(d)) + lift(E, static_cast<uint8_t>(e));
                const CurvePoint V = CurvePoint::affine(alpha, beta);
                if (!on_curve(E, V)) continue;
                if (point_sub(E, V, V.twist(1)) == Xi) return V;
            }
        }
    }
    throw InconsistencyError("solve_drinfeld_divisor: no point V with V - V^(1) = Xi");
}

ShtukaData build_shtuka(const CurvePtr& E, const CurvePoint& V) {
    if (V.is_infinity || !on_curve(E, V)) throw InvalidInput("build_shtuka: V is not an affine point of E");
    const CurvePoint Xi = CurvePoint::xi(E);
    const CurvePoint V1 = V.twist(1);
    if (point_sub(E, V, V1) != Xi) throw InvalidInput("build_shtuka: V - V^(1) != Xi");
    const CurvePoint mV = point_neg(E, V);
    ShtukaData sh;
    sh.curve = E;
    sh.V = V;
    sh.alpha = V.x;
    sh.beta = V.y;
    // V^(1), -V and Xi are collinear because they sum to zero.
    if (V1.x == mV.x) throw InconsistencyError("build_shtuka: V^(1) and -V are vertically aligned");
    sh.m = (V1.y - mV.y) / (V1.x - mV.x);
    if (Xi.y - V1.y != sh.m * (Xi.x - V1.x)) throw InconsistencyError("build_shtuka: collinearity failure");
    const CurveFunction t = CurveFunction::t(E), y = CurveFunction::y(E);
    sh.nu = y - cst(Xi.y) - (t - cst(Xi.x)).scaled(sh.m);
    sh.delta = t - cst(sh.alpha);
    sh.f = sh.nu / sh.delta;
    // xi is the limit normaliser of f^(i): xi^(q^i) / f^(i) -> 1.  The form
    // -(m + beta/alpha) agrees with it only when c1 alpha + c3 = 0, since nu
    // passes through -V rather than V.
    sh.xi = -(sh.m * Xi.x - Xi.y) / sh.alpha;
    if (order_at(sh.f, V1) != 1 || order_at(sh.f, Xi) != 1 || order_at(sh.f, V) != -1 || sh.f.degree() != 1 ||
        sh.f.deg_sgn().second != BaseElement::one(E))
        throw InconsistencyError("build_shtuka: divisor of f differs from (V^(1)) - (V) + (Xi) - (inf)");
    return sh;
}

CurvePoint basis_point(const ShtukaData& sh, int n, int i) {
    const CurvePtr& E = sh.curve;
    return point_add(E, point_mul(E, i, sh.V.twist(1)), point_mul(E, n - i, sh.V));
}

CurveDivisor g_divisor(const ShtukaData& sh, int n, int j) {
    if (j < 1 || j > n) throw InvalidInput("g_divisor: index out of range");
    CurveDivisor D;
    D.add(sh.V, -n);
    D.add(CurvePoint::infinity(), n - j);
    D.add(CurvePoint::xi(sh.curve), j - 1);
    D.add(basis_point(sh, n, j - 1), 1);
    return D;
}

CurveDivisor h_divisor(const ShtukaData& sh, int n, int j) {
    if (j < 1 || j > n) throw InvalidInput("h_divisor: index out of range");
    const CurvePtr& E = sh.curve;
    CurveDivisor D;
    D.add(sh.V.twist(1), n);
    D.add(CurvePoint::infinity(), -(n + j));
    D.add(CurvePoint::xi(E), j - 1);
    D.add(point_neg(E, basis_point(sh, n, n - (j - 1))), 1);
    return D;
}

MotiveBasis build_basis(const ShtukaData& sh, int n) {
    if (n < 1) throw InvalidInput("build_basis: n must be positive");
    MotiveBasis b;
    b.n = n;
    const BaseElement one = BaseElement::one(sh.curve);
    for (int j = 1; j <= n; ++j) {
        CurveFunction g = function_with_divisor(sh.curve, g_divisor(sh, n, j));
        CurveFunction h = function_with_divisor(sh.curve, h_divisor(sh, n, j));
        const auto [dg, sg] = g.deg_sgn();
        const auto [dh, sgh] = h.deg_sgn();
        if (dg != j - n || dh != n + j || sg != one || sgh != one)
            throw InconsistencyError("build_basis: degree or sign postcondition failed at j = " + std::to_string(j));
        b.g.push_back(std::move(g));
        b.h.push_back(std::move(h));
    }
    return b;
}

CurveFunction extend_basis(const MotiveBasis& basis, const ShtukaData& sh, BasisKind kind, int i) {
    const int n = basis.n;
    if (i < 1) throw InvalidInput("extend_basis: index must be positive");
    const auto [j, k] = split_index(i, n);
    if (kind == BasisKind::g) {
        CurveFunction prod = CurveFunction::one(sh.curve);
        for (int e = 0; e < j; ++e) prod = prod * f_twist(sh, e);
        return prod.pow(n) * basis.g[k - 1].twist(j);
    }
    return twisted_h(basis, sh, i, 0);
}

CurveFunction twisted_h(const MotiveBasis& basis, const ShtukaData& sh, int i, int s) {
    const int n = basis.n;
    if (i < 1) throw InvalidInput("twisted_h: index must be positive");
    const auto [j, k] = split_index(i, n);
    CurveFunction prod = CurveFunction::one(sh.curve);
    for (int e = s; e > s - j; --e) prod = prod * f_twist(sh, e);
    return prod.pow(n) * basis.h[k - 1].twist(s - j);
}

BaseElement a_uniform_formula(const ShtukaData& sh, int n, int i) {
    const CurvePtr& E = sh.curve;
    const CurvePoint P = basis_point(sh, n, i);
    if (P.is_infinity) throw InconsistencyError("a_uniform_formula: [i]V^(1) + [n-i]V is the point at infinity");
    const CurveParams& c = E->params();
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const BaseElement w = et.scaled(E->field().from_int(2)) + th.scaled(c.c1.v) + lift(E, c.c3.v);
    return w / (th - P.x);
}

BaseElement a_closed_form(const ShtukaData& sh, int n, int i) {
    if (i < 1 || i > n) throw InvalidInput("a_closed_form: index out of range");
    if (i < n) return a_uniform_formula(sh, n, i);
    // a_n = -(g_2/g_1)^(1) at -Xi, where g_2/g_1 = (y - eta - l (t - theta)) / (t - x([n]V))
    // with l the slope through Xi and [1]V^(1) + [n-1]V.
    const CurvePtr& E = sh.curve;
    const CurveParams& c = E->params();
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const CurvePoint P1 = basis_point(sh, n, 1), P0 = basis_point(sh, n, 0);
    if (P1.is_infinity || P0.is_infinity || P1.x == th)
        throw InconsistencyError("a_closed_form: degenerate configuration for a_n");
    const BaseElement l = (P1.y - et) / (P1.x - th);
    const BaseElement num = et + et.twist(1) + th.scaled(c.c1.v) + lift(E, c.c3.v) + l.twist(1) * (th - th.twist(1));
    return num / (th - P0.x.twist(1));
}

StructureCoeffs structure_coeffs(const MotiveBasis& basis, const ShtukaData& sh) {
    const int n = basis.n;
    const CurvePtr& E = sh.curve;
    const CurveFunction t = CurveFunction::t(E), y = CurveFunction::y(E);
    const BaseElement th = BaseElement::theta(E), et = BaseElement::eta(E);
    const CurveFunction T = cst(th), H = cst(et);
    auto G = [&](int i) { return i <= n ? basis.g[i - 1] : extend_basis(basis, sh, BasisKind::g, i); };
    auto lead_at = [&](const CurveFunction& L, int deg) {
        if (L.is_zero()) return BaseElement::zero(E);
        const auto [d, s] = L.deg_sgn();
        if (d > deg) throw InconsistencyError("structure_coeffs: residual degree too large");
        return d == deg ? s : BaseElement::zero(E);
    };
    StructureCoeffs sc;
    sc.n = n;
    std::vector<CurveFunction> g;
    for (int i = 1; i <= n + 3; ++i) g.push_back(G(i));
    auto gi = [&](int i) -> const CurveFunction& { return g[i - 1]; };
    for (int i = 1; i <= n; ++i) {
        const CurveFunction L = (t - T) * gi(i) - gi(i + 2);
        const BaseElement a = lead_at(L, gi(i + 1).degree());
        if (L != gi(i + 1).scaled(a))
            throw InconsistencyError("structure_coeffs: t-relation fails at i = " + std::to_string(i));
        if (a != a_closed_form(sh, n, i))
            throw InconsistencyError("structure_coeffs: closed form and linear extraction disagree for a_" +
                                     std::to_string(i));
        sc.a.push_back(a);
        const CurveFunction Ly = (y - H) * gi(i) - gi(i + 3);
        const BaseElement z = lead_at(Ly, gi(i + 2).degree());
        const CurveFunction rem = Ly - gi(i + 2).scaled(z);
        const BaseElement yy = lead_at(rem, gi(i + 1).degree());
        if (rem != gi(i + 1).scaled(yy))
            throw InconsistencyError("structure_coeffs: y-relation fails at i = " + std::to_string(i));
        sc.yc.push_back(yy);
        sc.zc.push_back(z);
    }
    // h-relation: t h_i = theta h_i + b_i h_{i+1} + h_{i+2}, twisted once so
    // that every term is K-rational.
    const CurveFunction Tq = cst(th.twist(1));
    for (int i = 1; i <= n; ++i) {
        const CurveFunction hi = twisted_h(basis, sh, i, 1);
        const CurveFunction h1 = twisted_h(basis, sh, i + 1, 1);
        const CurveFunction h2 = twisted_h(basis, sh, i + 2, 1);
        const CurveFunction L = (t - Tq) * hi - h2;
        const BaseElement bq = lead_at(L, h1.degree()) / h1.deg_sgn().second;
        if (L != h1.scaled(bq)) throw InconsistencyError("structure_coeffs: h-relation fails at i = " + std::to_string(i));
        if (i < n) {
            sc.b.push_back(bq.twist(-1));
        } else {
            sc.bn_q = bq;
            try {
                sc.bn = bq.twist(-1);
                sc.b.push_back(*sc.bn);
            } catch (const InconsistencyError&) {
                sc.bn.reset();
            }
        }
    }
    return sc;
}

bool in_N(const CurveFunction& g, const ShtukaData& sh, int n) {
    if (g.is_zero()) return true;
    if (!g.is_polynomial()) return false;
    return order_at(g, sh.V.twist(1)) >= n;
}

SigmaContext make_sigma_context(const MotiveBasis& basis, const ShtukaData& sh) {
    SigmaContext ctx;
    ctx.basis = &basis;
    ctx.sh = &sh;
    const CurvePoint Xi = CurvePoint::xi(sh.curve);
    for (const CurveFunction& h : basis.h) ctx.h_taylor.push_back(taylor_at(h, Xi, basis.n));
    ctx.fn = sh.f.pow(basis.n);
    return ctx;
}

SigmaDecomposition sigma_decompose(const CurveFunction& g, const SigmaContext& ctx) {
    const MotiveBasis& basis = *ctx.basis;
    const ShtukaData& sh = *ctx.sh;
    const int n = basis.n;
    if (!in_N(g, sh, n)) throw InvalidInput("sigma_decompose: function is not in N");
    const CurvePoint Xi = CurvePoint::xi(sh.curve);
    SigmaDecomposition dec;
    dec.n = n;
    CurveFunction w = g;
    const int guard = (g.is_zero() ? 0 : g.degree()) / n + 2;
    while (!w.is_zero()) {
        if (static_cast<int>(dec.levels.size()) > guard)
            throw InconsistencyError("sigma_decompose: degree did not decrease");
        // Level coefficients: kill the Taylor coefficients 0..n-1 at Xi.
        const std::vector<BaseElement> tw = taylor_at(w, Xi, n);
        std::vector<BaseElement> c(n, BaseElement::zero(sh.curve));
        std::vector<BaseElement> r = tw;
        CurveFunction v = CurveFunction::zero(sh.curve);
        for (int i = 1; i <= n; ++i) {
            const BaseElement& piv = ctx.h_taylor[i - 1][i - 1];
            c[i - 1] = r[i - 1] / piv;
            if (c[i - 1].is_zero()) continue;
            for (int s = i - 1; s < n; ++s) r[s] = r[s] - c[i - 1] * ctx.h_taylor[i - 1][s];
            v = v + basis.h[i - 1].scaled(c[i - 1]);
        }
        dec.levels.push_back(c);
        const CurveFunction rest = w - v;
        if (rest.is_zero()) break;
        const CurveFunction q = rest / ctx.fn;
        if (!q.is_polynomial()) throw InconsistencyError("sigma_decompose: remainder not divisible by f^n");
        w = q.twist(1);
    }
    if (dec.levels.empty()) dec.levels.push_back(std::vector<BaseElement>(n, BaseElement::zero(sh.curve)));
    return dec;
}

SigmaDecomposition sigma_decompose(const CurveFunction& g, const MotiveBasis& basis, const ShtukaData& sh) {
    return sigma_decompose(g, make_sigma_context(basis, sh));
}

bool sigma_reassembles(const CurveFunction& g, const SigmaDecomposition& dec, const MotiveBasis& basis,
                       const ShtukaData& sh) {
    const int n = basis.n;
    const int K = static_cast<int>(dec.levels.size()) - 1;
    auto level = [&](int k) {
        CurveFunction v = CurveFunction::zero(sh.curve);
        for (int i = 0; i < n; ++i) v = v + basis.h[i].scaled(dec.levels[k][i]);
        return v;
    };
    CurveFunction T = level(K);
    for (int k = K - 1; k >= 0; --k) T = level(k).twist(K - k) + sh.f.twist(K - k).pow(n) * T;
    return T == g.twist(K);
}

std::vector<BaseElement> epsilon(const SigmaDecomposition& dec) {
    const int n = dec.n;
    std::vector<BaseElement> out(n, dec.levels.at(0).at(0).zero_like());
    for (const auto& lv : dec.levels)
        for (int i = 0; i < n; ++i) out[n - 1 - i] = out[n - 1 - i] + lv[i];
    return out;
}

}  // namespace drinfeld
