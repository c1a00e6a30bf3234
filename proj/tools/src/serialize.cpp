#include "drinfeld/cli/serialize.hpp"

#include <charconv>
#include <sstream>

#include "drinfeld/text.hpp"

namespace drinfeld::cli {

namespace {

std::string idx(const std::string& prefix, int i) { return prefix + "." + std::to_string(i); }

int to_int(std::string_view s, std::string_view what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidInput("record: '" + std::string(what) + "' is not an integer: " + std::string(s));
    return v;
}

BaseElement read_k(const Record& r, const std::string& key, const CurvePtr& E) {
    return parse_base_element(E, r.get(key));
}

CurveFunction read_fn(const Record& r, const std::string& key, const CurvePtr& E) {
    return parse_curve_function(E, r.get(key));
}

void write_k_list(Record& r, const std::string& prefix, const std::vector<BaseElement>& v) {
    r.put(prefix + ".count", std::to_string(v.size()));
    for (size_t i = 0; i < v.size(); ++i) r.put(idx(prefix, static_cast<int>(i) + 1), v[i].to_string());
}

std::vector<BaseElement> read_k_list(const Record& r, const std::string& prefix, const CurvePtr& E) {
    const int count = r.get_int(prefix + ".count");
    if (count < 0) throw InvalidInput("record: negative count for " + prefix);
    std::vector<BaseElement> v;
    for (int i = 1; i <= count; ++i) v.push_back(read_k(r, idx(prefix, i), E));
    return v;
}

void write_series_list(Record& r, const std::string& prefix, const InfVector& v) {
    r.put(prefix + ".count", std::to_string(v.size()));
    for (size_t i = 0; i < v.size(); ++i) r.put(idx(prefix, static_cast<int>(i) + 1), write_series(v[i]));
}

InfVector read_series_list(const Record& r, const std::string& prefix, const FiniteField* F) {
    const int count = r.get_int(prefix + ".count");
    if (count < 0) throw InvalidInput("record: negative count for " + prefix);
    InfVector v;
    for (int i = 1; i <= count; ++i) v.push_back(read_series(F, r.get(idx(prefix, i))));
    return v;
}

void write_matrix_list(Record& r, const std::string& prefix, const std::vector<KMatrix>& v) {
    r.put(prefix + ".count", std::to_string(v.size()));
    for (size_t i = 0; i < v.size(); ++i) write_matrix(r, idx(prefix, static_cast<int>(i)), v[i]);
}

std::vector<KMatrix> read_matrix_list(const Record& r, const std::string& prefix, const CurvePtr& E) {
    const int count = r.get_int(prefix + ".count");
    if (count < 0) throw InvalidInput("record: negative count for " + prefix);
    std::vector<KMatrix> v;
    for (int i = 0; i < count; ++i) v.push_back(read_matrix(r, idx(prefix, i), E));
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Record

void Record::put(std::string key, std::string value) {
    if (key.empty() || key.find_first_of(" \t\n=#") != std::string::npos)
        throw InvalidInput("record: invalid key '" + key + "'");
    if (value.find('\n') != std::string::npos) throw InvalidInput("record: multi-line value for '" + key + "'");
    if (has(key)) throw InvalidInput("record: duplicate key '" + key + "'");
    entries_.emplace_back(std::move(key), std::move(value));
}

bool Record::has(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

const std::string& Record::get(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    throw InvalidInput("record: missing key '" + std::string(key) + "'");
}

int Record::get_int(std::string_view key) const { return to_int(get(key), key); }

std::string Record::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

Record Record::parse(std::string_view text) {
    Record r;
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const size_t eq = line.find(" = ");
        if (eq == std::string_view::npos)
            throw InvalidInput("record line " + std::to_string(line_no) + ": expected 'key = value'");
        r.put(std::string(line.substr(0, eq)), std::string(line.substr(eq + 3)));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Series

std::string write_series(const InfSeries& s) {
    std::ostringstream os;
    os << s.xi_num();
    if (s.is_exact_zero()) {
        os << " exact-zero";
        return os.str();
    }
    const Laurent<Fq>& L = s.series();
    os << " " << L.val() << " " << L.prec() << " :";
    for (const Fq& c : L.coeffs()) os << " " << s.field()->to_string(c.value());
    return os.str();
}

InfSeries read_series(const FiniteField* F, std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string tag, a;
    if (!(is >> tag >> a)) throw InvalidInput("series: truncated record");
    const int xi_num = to_int(tag, "tag");
    if (a == "exact-zero") {
        std::string rest;
        if (is >> rest) throw InvalidInput("series: trailing characters");
        return InfSeries::exact_zero(F, xi_num);
    }
    std::string b, colon;
    if (!(is >> b >> colon) || colon != ":") throw InvalidInput("series: expected 'val prec :'");
    const int val = to_int(a, "val"), prec = to_int(b, "prec");
    if (prec < val) throw InvalidInput("series: precision below valuation");
    std::vector<Fq> c;
    std::string tok;
    while (is >> tok) c.emplace_back(F, parse_fq(*F, tok));
    if (static_cast<int>(c.size()) != prec - val)
        throw InvalidInput("series: coefficient count does not match precision");
    return InfSeries::from_series(Laurent<Fq>(Fq(F, 0), val, std::move(c)), xi_num);
}

// ---------------------------------------------------------------------------
// Algebraic data

void write_point(Record& r, const std::string& key, const CurvePoint& P) { r.put(key, P.to_string()); }

CurvePoint read_point(const Record& r, const std::string& key, const CurvePtr& E) {
    return parse_curve_point(E, r.get(key));
}

void write_matrix(Record& r, const std::string& prefix, const KMatrix& m) {
    r.put(prefix + ".shape", std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            r.put(prefix + "." + std::to_string(i + 1) + "." + std::to_string(j + 1), m(i, j).to_string());
}

KMatrix read_matrix(const Record& r, const std::string& prefix, const CurvePtr& E) {
    const std::string& shape = r.get(prefix + ".shape");
    const size_t x = shape.find('x');
    if (x == std::string::npos) throw InvalidInput("record: malformed shape for " + prefix);
    const int rows = to_int(std::string_view(shape).substr(0, x), "rows");
    const int cols = to_int(std::string_view(shape).substr(x + 1), "cols");
    KMatrix m(rows, cols, BaseElement::zero(E));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = read_k(r, prefix + "." + std::to_string(i + 1) + "." + std::to_string(j + 1), E);
    return m;
}

void write_operator(Record& r, const std::string& prefix, const KOperator& op) {
    r.put(prefix + ".shape", std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
    r.put(prefix + ".order", std::to_string(op.order()));
    for (int k = 0; k <= op.order(); ++k) write_matrix(r, idx(prefix, k), op.terms()[k]);
}

KOperator read_operator(const Record& r, const std::string& prefix, const CurvePtr& E) {
    const int order = r.get_int(prefix + ".order");
    if (order < 0) {
        const std::string& shape = r.get(prefix + ".shape");
        const size_t x = shape.find('x');
        if (x == std::string::npos) throw InvalidInput("record: malformed shape for " + prefix);
        return KOperator(to_int(std::string_view(shape).substr(0, x), "rows"),
                         to_int(std::string_view(shape).substr(x + 1), "cols"), BaseElement::zero(E));
    }
    std::vector<KMatrix> terms;
    for (int k = 0; k <= order; ++k) terms.push_back(read_matrix(r, idx(prefix, k), E));
    KOperator op(std::move(terms));
    if (op.order() != order) throw InvalidInput("record: operator " + prefix + " has a zero top coefficient");
    return op;
}

Record write_shtuka(const ShtukaData& sh) {
    Record r;
    write_point(r, "V", sh.V);
    r.put("f", sh.f.to_string());
    r.put("nu", sh.nu.to_string());
    r.put("delta", sh.delta.to_string());
    r.put("m", sh.m.to_string());
    r.put("alpha", sh.alpha.to_string());
    r.put("beta", sh.beta.to_string());
    r.put("xi", sh.xi.to_string());
    return r;
}

ShtukaData read_shtuka(const Record& r, const CurvePtr& E) {
    ShtukaData sh;
    sh.curve = E;
    sh.V = read_point(r, "V", E);
    sh.f = read_fn(r, "f", E);
    sh.nu = read_fn(r, "nu", E);
    sh.delta = read_fn(r, "delta", E);
    sh.m = read_k(r, "m", E);
    sh.alpha = read_k(r, "alpha", E);
    sh.beta = read_k(r, "beta", E);
    sh.xi = read_k(r, "xi", E);
    return sh;
}

Record write_basis(const MotiveBasis& b) {
    Record r;
    r.put("n", std::to_string(b.n));
    for (int i = 0; i < b.n; ++i) r.put(idx("g", i + 1), b.g[i].to_string());
    for (int i = 0; i < b.n; ++i) r.put(idx("h", i + 1), b.h[i].to_string());
    return r;
}

MotiveBasis read_basis(const Record& r, const CurvePtr& E) {
    MotiveBasis b;
    b.n = r.get_int("n");
    if (b.n < 1) throw InvalidInput("record: basis dimension must be positive");
    for (int i = 1; i <= b.n; ++i) b.g.push_back(read_fn(r, idx("g", i), E));
    for (int i = 1; i <= b.n; ++i) b.h.push_back(read_fn(r, idx("h", i), E));
    return b;
}

namespace {

void put_coeffs(Record& r, const std::string& p, const StructureCoeffs& c) {
    r.put(p + "n", std::to_string(c.n));
    write_k_list(r, p + "a", c.a);
    write_k_list(r, p + "b", c.b);
    write_k_list(r, p + "y", c.yc);
    write_k_list(r, p + "z", c.zc);
    r.put(p + "bn_q", c.bn_q.to_string());
    r.put(p + "bn", c.bn ? c.bn->to_string() : "none");
}

StructureCoeffs get_coeffs(const Record& r, const std::string& p, const CurvePtr& E) {
    StructureCoeffs c;
    c.n = r.get_int(p + "n");
    c.a = read_k_list(r, p + "a", E);
    c.b = read_k_list(r, p + "b", E);
    c.yc = read_k_list(r, p + "y", E);
    c.zc = read_k_list(r, p + "z", E);
    c.bn_q = read_k(r, p + "bn_q", E);
    if (r.get(p + "bn") != "none") c.bn = read_k(r, p + "bn", E);
    return c;
}

}  // namespace

Record write_coeffs(const StructureCoeffs& c) {
    Record r;
    put_coeffs(r, "", c);
    return r;
}

StructureCoeffs read_coeffs(const Record& r, const CurvePtr& E) { return get_coeffs(r, "", E); }

Record write_module(const AndersonModule& M) {
    Record r;
    r.put("n", std::to_string(M.n));
    write_operator(r, "rho_t", M.rho_t);
    write_operator(r, "rho_y", M.rho_y);
    put_coeffs(r, "coeffs.", M.coeffs);
    return r;
}

AndersonModule read_module(const Record& r, const CurvePtr& E) {
    AndersonModule M;
    M.n = r.get_int("n");
    M.rho_t = read_operator(r, "rho_t", E);
    M.rho_y = read_operator(r, "rho_y", E);
    M.coeffs = get_coeffs(r, "coeffs.", E);
    if (M.rho_t.rows() != M.n || M.rho_y.rows() != M.n || M.rho_t.order() < 0 || M.rho_y.order() < 0)
        throw InvalidInput("record: module operators do not match the dimension");
    return M;
}

Record write_explog(const ExpLogCoeffs& c) {
    Record r;
    write_matrix_list(r, "Q", c.Q);
    write_matrix_list(r, "P", c.P);
    return r;
}

ExpLogCoeffs read_explog(const Record& r, const CurvePtr& E) {
    ExpLogCoeffs c;
    c.Q = read_matrix_list(r, "Q", E);
    c.P = read_matrix_list(r, "P", E);
    return c;
}

Record write_period(const PeriodResult& p) {
    Record r;
    write_series_list(r, "Pi", p.Pi);
    r.put("pi", write_series(p.pi));
    r.put("pi_residue", write_series(p.pi_residue));
    r.put("ratio", write_series(p.ratio));
    r.put("ratio_xi_power", std::to_string(p.ratio_xi_power));
    r.put("ratio_residue", write_series(p.ratio_residue));
    r.put("omega_factors", std::to_string(p.omega_factors));
    r.put("pi_factors", std::to_string(p.pi_factors));
    r.put("theorem_value", p.theorem_value.to_string());
    r.put("residue_value", p.residue_value.to_string());
    r.put("theorem_agree", std::to_string(p.theorem_agree));
    r.put("theorem_agree_residue", std::to_string(p.theorem_agree_residue));
    r.put("residue_agree", std::to_string(p.residue_agree));
    return r;
}

PeriodResult read_period(const Record& r, const CurvePtr& E) {
    const FiniteField* F = E->field_ptr();
    PeriodResult p;
    p.Pi = read_series_list(r, "Pi", F);
    p.pi = read_series(F, r.get("pi"));
    p.pi_residue = read_series(F, r.get("pi_residue"));
    p.ratio = read_series(F, r.get("ratio"));
    p.ratio_xi_power = r.get_int("ratio_xi_power");
    p.ratio_residue = read_series(F, r.get("ratio_residue"));
    p.omega_factors = r.get_int("omega_factors");
    p.pi_factors = r.get_int("pi_factors");
    p.theorem_value = read_k(r, "theorem_value", E);
    p.residue_value = read_k(r, "residue_value", E);
    p.theorem_agree = r.get_int("theorem_agree");
    p.theorem_agree_residue = r.get_int("theorem_agree_residue");
    p.residue_agree = r.get_int("residue_agree");
    return p;
}

// ---------------------------------------------------------------------------
// Exact comparison

bool same(const ShtukaData& a, const ShtukaData& b) {
    return a.V.to_string() == b.V.to_string() && a.f == b.f && a.nu == b.nu && a.delta == b.delta &&
           a.m == b.m && a.alpha == b.alpha && a.beta == b.beta && a.xi == b.xi;
}

bool same(const MotiveBasis& a, const MotiveBasis& b) { return a.n == b.n && a.g == b.g && a.h == b.h; }

bool same(const StructureCoeffs& a, const StructureCoeffs& b) {
    return a.n == b.n && a.a == b.a && a.b == b.b && a.yc == b.yc && a.zc == b.zc && a.bn_q == b.bn_q &&
           a.bn == b.bn;
}

bool same(const AndersonModule& a, const AndersonModule& b) {
    return a.n == b.n && a.rho_t == b.rho_t && a.rho_y == b.rho_y && same(a.coeffs, b.coeffs);
}

bool same(const ExpLogCoeffs& a, const ExpLogCoeffs& b) { return a.Q == b.Q && a.P == b.P; }

}  // namespace drinfeld::cli
