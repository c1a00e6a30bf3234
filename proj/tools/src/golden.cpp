#include "drinfeld/cli/golden.hpp"

#include <string>

namespace drinfeld::cli {

namespace {

void add(CheckGroup& g, std::string name, bool pass, std::string detail = {}) {
    g.checks.push_back({std::move(name), pass, false, std::move(detail)});
}

}  // namespace

bool is_worked_example(const JobConfig& cfg) {
    const CurveParams& c = cfg.curve;
    return cfg.field.p == 3 && cfg.field.r == 1 && c.c1.v == 0 && c.c2.v == 0 && c.c3.v == 0 && c.c4.v == 2 &&
           c.c6.v == 2 && cfg.n == 2;
}

JobConfig worked_example_config() {
    JobConfig cfg;
    cfg.field = FqConfig{3, 1, {}};
    cfg.curve = CurveParams{{0}, {0}, {0}, {2}, {2}};
    cfg.n = 2;
    return cfg;
}

CheckGroup worked_example_algebra(const ShtukaData& sh, const MotiveBasis& basis, const AndersonModule& M) {
    const CurvePtr& E = sh.curve;
    CheckGroup g{"worked example (exact)", {}};
    const BaseElement o = BaseElement::one(E), th = BaseElement::theta(E), h = BaseElement::eta(E);
    const BaseElement h2 = h * h;
    const auto t = CurveFunction::t(E), y = CurveFunction::y(E), one = CurveFunction::one(E);
    const auto T = CurveFunction::constant(th), H = CurveFunction::constant(h), H2 = H * H;

    add(g, "V = (theta + 1, eta)", !sh.V.is_infinity && sh.V.x == th + o && sh.V.y == h);
    add(g, "xi = -eta (theta + 2)/(theta + 1)", sh.xi * (th + o) == -(h * (th + BaseElement::constant(E, 2))));
    add(g, "f = (y - eta - eta (t - theta))/(t - theta - 1)", sh.f * (t - T - one) == y - H - H * (t - T));

    const CurveFunction g1n = H2 + H * y + t - T - one;
    const CurveFunction g1d = H * t * t + H * t * T + H * T * T + H * t - H * T + H;
    add(g, "g_1 = (eta^2 + eta y + t - theta - 1)/(eta t^2 + eta t theta + eta theta^2 + eta t - eta theta + eta)",
        basis.n >= 1 && basis.g[0] * g1d == g1n);
    const CurveFunction g2n =
        H2 * t * t + H2 * t * T + H2 * T * T + H2 * t - H2 * T - H2 + t * t + t * T + T * T + H * y - t + T;
    const CurveFunction g2d =
        H2 * t * t + H2 * t * T + H2 * T * T + H2 * t - H2 * T + H2 + t * t + t * T + T * T + t - T + one;
    add(g, "g_2 = (displayed quotient of degree-4 numerator and denominator)", basis.n >= 2 && basis.g[1] * g2d == g2n);

    bool dth = M.n == 2;
    if (dth) {
        const KMatrix& D = M.dtheta();
        dth = D(0, 0) == th && D(1, 1) == th && D(1, 0).is_zero() && D(0, 1) * h.pow(3) == -((h2 + o) * (h2 + o));
    }
    add(g, "d[theta] = [[theta, -(eta^2+1)^2/eta^3], [0, theta]]", dth);
    bool eth = M.n == 2;
    if (eth) {
        const KMatrix Et = M.Etheta();
        eth = Et(0, 0) == o && Et(1, 1) == o && Et(0, 1).is_zero() &&
              Et(1, 0) * (h2 + o).pow(3) == -(h.pow(3) * (h.pow(4) - h2 - o));
    }
    add(g, "E_theta = [[1, 0], [-eta^3(eta^4-eta^2-1)/(eta^2+1)^3, 1]]", eth);
    add(g, "rho_t has tau-order 1", M.rho_t.order() == 1);
    return g;
}

BaseElement worked_example_ratio(const CurvePtr& E) {
    const BaseElement o = BaseElement::one(E), h = BaseElement::eta(E);
    const BaseElement h2 = h * h;
    return -((h2 + o) * (h2 + o)) / (h.pow(5) - h.pow(3) - h);
}

CheckGroup worked_example_period(const PeriodResult& P, const CurvePtr& E, const TruncationPolicy& policy,
                                 int min_agree) {
    CheckGroup g{"worked example (series)", {}};
    const InfSeries expect = embed(worked_example_ratio(E), policy);
    const int agree = agreeing_coeffs(P.ratio, expect, expect.leading_exp());
    add(g, "Pi_2[last]/pi_rho^2 = -(eta^2+1)^2/(eta^5-eta^3-eta)", agree >= min_agree,
        std::to_string(agree) + " coefficients agree, " + std::to_string(min_agree) + " required");
    add(g, "xi tags of Pi_2[last]/pi_rho^2 cancel to xi^-2", P.ratio_xi_power == -2,
        "xi^" + std::to_string(P.ratio_xi_power));
    return g;
}

}  // namespace drinfeld::cli
