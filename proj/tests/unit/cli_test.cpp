#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "drinfeld/cli/cache.hpp"
#include "drinfeld/cli/commands.hpp"
#include "drinfeld/cli/golden.hpp"
#include "drinfeld/cli/serialize.hpp"
#include "drinfeld/text.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace drinfeld;
using namespace drinfeld::cli;
using namespace drinfeld::test;

namespace {

const char* kTernary = R"(# worked example
[field]
p = 3
r = 1
[curve]
c1 = 0
c2 = 0
c3 = 0
c4 = 2
c6 = 2
[run]
n = 2
)";

const char* kBinary = R"([field]
p = 2
[curve]
c1 = 0
c2 = 0
c3 = 1
c4 = 1
c6 = 1
[run]
n = 2
)";

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("drinfeld-test-" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, WorkedExampleJob) {
    const JobConfig cfg = parse_config(kTernary);
    EXPECT_TRUE(is_worked_example(cfg));
    EXPECT_EQ(cfg.field.p, 3);
    EXPECT_EQ(cfg.curve.c4.v, 2);
    EXPECT_EQ(cfg.n, 2);
    EXPECT_EQ(cfg.policy.exp_terms, TruncationPolicy{}.exp_terms);
    EXPECT_FALSE(is_worked_example(parse_config(kBinary)));
}

TEST(Config, Errors) {
    EXPECT_NE(error_text("[field]\nr = 1\n[curve]\nc1=0\nc2=0\nc3=0\nc4=2\nc6=2\n[run]\nn=2\n")
                  .find("missing required key 'p'"),
              std::string::npos);
    EXPECT_NE(error_text("[field]\np = 4\n").find("p = 4 is not prime"), std::string::npos);
    EXPECT_EQ(error_line("[field]\np = 4\n"), 2);
    EXPECT_EQ(error_line("[field]\np = 3\n\n[curve]\nc1 = 0\nfoo = 1\n"), 6);
    EXPECT_NE(error_text("[field]\np = 3\n[curve]\nfoo = 1\n").find("unknown key 'foo'"), std::string::npos);
    EXPECT_EQ(error_line("[field]\np = 3\np = 3\n"), 3);
    EXPECT_EQ(error_line("[colour]\n"), 1);
    EXPECT_EQ(error_line("p = 3\n"), 1);
    EXPECT_EQ(error_line("[field]\np three\n"), 2);
    // Singular curve y^2 = t^3.
    EXPECT_NE(error_text("[field]\np=3\n[curve]\nc1=0\nc2=0\nc3=0\nc4=0\nc6=0\n[run]\nn=2\n"), "");
    // n above n_max.
    std::string big = kTernary;
    big.replace(big.find("n = 2"), 5, "n = 17");
    EXPECT_NE(error_text(big).find("n must lie in [1, 16]"), std::string::npos);
    big += "n_max = 20\n";
    EXPECT_EQ(parse_config(big).n, 17);
}

TEST(Config, CanonicalTextSeparatesScopes) {
    JobConfig a = parse_config(kTernary), b = a;
    b.n = 3;
    EXPECT_EQ(canonical_config(a, ConfigScope::curve), canonical_config(b, ConfigScope::curve));
    EXPECT_NE(canonical_config(a, ConfigScope::dimension), canonical_config(b, ConfigScope::dimension));
    b = a;
    b.policy.exp_terms = 3;
    EXPECT_EQ(canonical_config(a, ConfigScope::dimension), canonical_config(b, ConfigScope::dimension));
    EXPECT_NE(canonical_config(a, ConfigScope::expansion), canonical_config(b, ConfigScope::expansion));
}

TEST(Serialize, RecordText) {
    Record r;
    r.put("a", "1");
    r.put("b.c", "x = y");
    EXPECT_EQ(r.to_text(), "a = 1\nb.c = x = y\n");
    EXPECT_EQ(Record::parse("# comment\n" + r.to_text()), r);
    EXPECT_THROW(r.put("a", "2"), InvalidInput);
    EXPECT_THROW(r.put("has space", "2"), InvalidInput);
    EXPECT_THROW(Record::parse("novalue\n"), InvalidInput);
    EXPECT_THROW(r.get("missing"), InvalidInput);
}

TEST(Serialize, SeriesRoundTrip) {
    const CurvePtr E = curve_f3();
    const FiniteField* F = E->field_ptr();
    const InfSeries x = embed(BaseElement::theta(E) / BaseElement::eta(E), 10);
    const InfSeries tagged = InfSeries::from_series(x.series(), 3);
    for (const InfSeries& s : {x, tagged, InfSeries::exact_zero(F, 2), x - x}) {
        const std::string text = write_series(s);
        const InfSeries back = read_series(F, text);
        EXPECT_EQ(write_series(back), text);
        EXPECT_EQ(back.is_exact_zero(), s.is_exact_zero());
        EXPECT_EQ(back.xi_num(), s.xi_num());
    }
    EXPECT_EQ(write_series(InfSeries::exact_zero(F, 2)), "2 exact-zero");
    EXPECT_EQ(write_series(InfSeries::constant(F, 2, 3)), "0 0 3 : 2 0 0");
    EXPECT_THROW(read_series(F, "0 0 3 : 2 0"), InvalidInput);
    EXPECT_THROW(read_series(F, "0 0 1 : 3"), InvalidInput);
}

TEST(Serialize, AlgebraicArtifactsRoundTripExactly) {
    for (const CurvePtr& E : {curve_f3(), curve_f2()}) {
        const Built B = build_all(E, 3);
        const ExpLogCoeffs c = exp_log_coeffs(B.M, 2);
        const std::string ts = write_shtuka(B.sh).to_text(), tb = write_basis(B.basis).to_text(),
                          tc = write_coeffs(B.coeffs).to_text(), tm = write_module(B.M).to_text(),
                          te = write_explog(c).to_text();
        const ShtukaData sh = read_shtuka(Record::parse(ts), E);
        const MotiveBasis b = read_basis(Record::parse(tb), E);
        const StructureCoeffs sc = read_coeffs(Record::parse(tc), E);
        const AndersonModule M = read_module(Record::parse(tm), E);
        const ExpLogCoeffs c2 = read_explog(Record::parse(te), E);
        EXPECT_TRUE(same(sh, B.sh));
        EXPECT_TRUE(same(b, B.basis));
        EXPECT_TRUE(same(sc, B.coeffs));
        EXPECT_TRUE(same(M, B.M));
        EXPECT_TRUE(same(c2, c));
        EXPECT_EQ(write_shtuka(sh).to_text(), ts);
        EXPECT_EQ(write_basis(b).to_text(), tb);
        EXPECT_EQ(write_coeffs(sc).to_text(), tc);
        EXPECT_EQ(write_module(M).to_text(), tm);
        EXPECT_EQ(write_explog(c2).to_text(), te);
    }
}

TEST(Serialize, PeriodRoundTrip) {
    const Built B = build_all(curve_f2(), 2);
    TruncationPolicy pol;
    const PeriodResult P = period_vector(B.M, B.basis, make_infinity_data(B.sh, pol, pol.local_terms_for(2)));
    const std::string text = write_period(P).to_text();
    const PeriodResult back = read_period(Record::parse(text), curve_f2());
    EXPECT_EQ(write_period(back).to_text(), text);
    EXPECT_EQ(back.ratio, P.ratio);
    EXPECT_EQ(back.theorem_value, P.theorem_value);
}

TEST(Cache, DigestAndFiles) {
    // FNV-1a 64 reference vectors.
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);

    const auto dir = temp_dir("cache");
    const Cache cache(dir);
    Record r;
    r.put("k", "v");
    EXPECT_FALSE(cache.load("thing", "cfg-a").has_value());
    cache.store("thing", "cfg-a", r);
    EXPECT_EQ(cache.load("thing", "cfg-a"), r);
    EXPECT_NE(cache.path("thing", "cfg-a"), cache.path("thing", "cfg-b"));
    // A file whose header names another configuration is rejected.
    std::filesystem::copy_file(cache.path("thing", "cfg-a"), cache.path("thing", "cfg-b"));
    EXPECT_THROW(cache.load("thing", "cfg-b"), InconsistencyError);
    EXPECT_FALSE(Cache("").load("thing", "cfg-a").has_value());
    std::filesystem::remove_all(dir);
}

TEST(Commands, BinaryCurveVerifiesCleanlyAndDeterministically) {
    JobConfig cfg = parse_config(kBinary);
    cfg.cache_dir = temp_dir("verify-f2").string();
    const Report cold = run_command(cfg, "verify");
    const Report warm = run_command(cfg, "verify");
    EXPECT_EQ(cold.exit_code, exit_pass) << render_text(cold);
    EXPECT_EQ(render_text(cold), render_text(warm));
    EXPECT_EQ(render_json(cold), render_json(warm));
    const auto j = nlohmann::json::parse(render_json(cold));
    EXPECT_EQ(j["status"], "PASS");
    EXPECT_EQ(j["failures"], 0);
    EXPECT_EQ(j["groups"].size(), cold.groups.size());
    cfg.cache_dir.clear();
    EXPECT_EQ(render_text(run_command(cfg, "verify")), render_text(cold));
    std::filesystem::remove_all(temp_dir("verify-f2"));
}

TEST(Commands, TernaryCurveFailsExactlyThePeriodProductChecks) {
    const JobConfig cfg = parse_config(kTernary);
    const Report r = run_command(cfg, "verify");
    EXPECT_EQ(r.exit_code, exit_identity_failure);
    std::set<std::string> failed;
    for (const auto& g : r.groups)
        for (const auto& c : g.checks)
            if (!c.pass) failed.insert(c.name);
    const std::set<std::string> expected{
        "product formula for pi_rho equals -Res_Xi(omega_rho lambda)",
        "Pi_n[last]/pi_rho^n = g_1(Xi)/(a_1...a_{n-1}) with the product formula for pi_rho",
        "Pi_n[last]/pi^n = g_1(Xi)/(a_1...a_{n-1}) with pi = -Res_Xi(omega_rho lambda)",
        "Pi_2[last]/pi_rho^2 = -(eta^2+1)^2/(eta^5-eta^3-eta)",
    };
    EXPECT_EQ(failed, expected);
}

TEST(Commands, BasisOutputMatchesCache) {
    JobConfig cfg = parse_config(kBinary);
    cfg.cache_dir = temp_dir("basis").string();
    const Report r = run_command(cfg, "basis");
    EXPECT_EQ(r.exit_code, exit_pass);
    const auto load = Cache(cfg.cache_dir).load("basis", canonical_config(cfg, ConfigScope::dimension));
    ASSERT_TRUE(load.has_value());
    const MotiveBasis b = read_basis(*load, make_curve(cfg));
    ASSERT_EQ(b.n, 2);
    const CurvePtr E = make_curve(cfg);
    for (const auto& [k, v] : r.values) {
        const int i = k[2] - '1';
        EXPECT_EQ(parse_curve_function(E, v), k[0] == 'g' ? b.g[i] : b.h[i]) << k;
    }
    std::filesystem::remove_all(cfg.cache_dir);
}

TEST(Commands, ExitCodes) {
    JobConfig cfg = parse_config(kBinary);
    EXPECT_EQ(run_command(cfg, "frobnicate").exit_code, exit_invalid_input);
    cfg.policy.product_cap = 1;
    EXPECT_EQ(run_command(cfg, "period").exit_code, exit_precision);
    EXPECT_EQ(run_command(parse_config(kTernary), "period").exit_code, exit_identity_failure);
    EXPECT_EQ(run_command(parse_config(kTernary), "divisor").exit_code, exit_pass);
}
