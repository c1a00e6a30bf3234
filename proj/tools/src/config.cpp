#include "drinfeld/cli/config.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "drinfeld/text.hpp"

namespace drinfeld::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"field", {"p", "r", "modulus"}},
        {"curve", {"c1", "c2", "c3", "c4", "c6"}},
        {"run", {"n", "n_max", "u_prec", "local_terms", "product_cap", "exp_terms", "cache_dir"}},
    };
    return k;
}

long long to_int(const Entry& e, const std::string& key) {
    long long v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(e.line, "'" + key + "' must be an integer");
    return v;
}

}  // namespace

JobConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;  // "section.key"
    std::string section;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_keys().count(section)) throw ConfigError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) throw ConfigError(line_no, "'" + key + "' appears before any section");
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (!known_keys().at(section).count(key))
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) throw ConfigError(line_no, "'" + key + "' has no value");
        const std::string full = section + "." + key;
        if (entries.count(full)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        entries[full] = {value, line_no};
    }

    auto need = [&](const std::string& full) -> const Entry& {
        auto it = entries.find(full);
        if (it == entries.end()) {
            const std::string key = full.substr(full.find('.') + 1);
            throw ConfigError(0, "missing required key '" + key + "' in [" + full.substr(0, full.find('.')) + "]");
        }
        return it->second;
    };
    auto opt_int = [&](const std::string& full, long long dflt, long long lo, long long hi) {
        auto it = entries.find(full);
        if (it == entries.end()) return dflt;
        const std::string key = full.substr(full.find('.') + 1);
        const long long v = to_int(it->second, key);
        if (v < lo || v > hi)
            throw ConfigError(it->second.line, "'" + key + "' must lie in [" + std::to_string(lo) + ", " +
                                                   std::to_string(hi) + "]");
        return v;
    };

    JobConfig cfg;
    const Entry& pe = need("field.p");
    const long long p = to_int(pe, "p");
    if (p < 2 || !is_prime(p)) throw ConfigError(pe.line, "p = " + pe.value + " is not prime");
    cfg.field.p = static_cast<int>(p);
    cfg.field.r = static_cast<int>(opt_int("field.r", 1, 1, 8));
    if (auto it = entries.find("field.modulus"); it != entries.end()) {
        std::istringstream is(it->second.value);
        std::string tok;
        while (is >> tok) {
            Entry e{tok, it->second.line};
            cfg.field.modulus.push_back(static_cast<int>(to_int(e, "modulus")));
        }
    } else if (cfg.field.r > 1) {
        throw ConfigError(0, "missing required key 'modulus' in [field] (r > 1)");
    }
    std::shared_ptr<const FiniteField> F;
    try {
        F = FiniteField::make(cfg.field);
    } catch (const InvalidInput& e) {
        throw ConfigError(pe.line, e.what());
    }
    FqElement* coeffs[] = {&cfg.curve.c1, &cfg.curve.c2, &cfg.curve.c3, &cfg.curve.c4, &cfg.curve.c6};
    const char* names[] = {"c1", "c2", "c3", "c4", "c6"};
    for (int k = 0; k < 5; ++k) {
        const Entry& e = need(std::string("curve.") + names[k]);
        try {
            coeffs[k]->v = parse_fq(*F, e.value);
        } catch (const InvalidInput& err) {
            throw ConfigError(e.line, std::string("'") + names[k] + "': " + err.what());
        }
    }
    const Entry& ne = need("run.n");
    cfg.n_max = static_cast<int>(opt_int("run.n_max", 16, 1, 64));
    const long long n = to_int(ne, "n");
    if (n < 1 || n > cfg.n_max)
        throw ConfigError(ne.line, "n must lie in [1, " + std::to_string(cfg.n_max) + "]");
    cfg.n = static_cast<int>(n);
    cfg.policy.u_prec = static_cast<int>(opt_int("run.u_prec", cfg.policy.u_prec, 1, 4096));
    cfg.policy.local_terms = static_cast<int>(opt_int("run.local_terms", cfg.policy.local_terms, 0, 256));
    cfg.policy.product_cap = static_cast<int>(opt_int("run.product_cap", cfg.policy.product_cap, 1, 4096));
    cfg.policy.exp_terms = static_cast<int>(opt_int("run.exp_terms", cfg.policy.exp_terms, 0, 64));
    if (auto it = entries.find("run.cache_dir"); it != entries.end()) cfg.cache_dir = it->second.value;
    try {
        cfg.policy.validate();
        make_curve(cfg);
    } catch (const InvalidInput& e) {
        throw ConfigError(0, e.what());
    }
    return cfg;
}

CurvePtr make_curve(const JobConfig& cfg) { return Curve::make(FiniteField::make(cfg.field), cfg.curve); }

std::string canonical_config(const JobConfig& cfg, ConfigScope scope) {
    std::ostringstream os;
    os << "p=" << cfg.field.p << ";r=" << cfg.field.r << ";modulus=";
    if (cfg.field.r > 1)
        for (size_t i = 0; i < cfg.field.modulus.size(); ++i) os << (i ? "," : "") << cfg.field.modulus[i];
    const CurveParams& c = cfg.curve;
    os << ";c=" << int(c.c1.v) << "," << int(c.c2.v) << "," << int(c.c3.v) << "," << int(c.c4.v) << ","
       << int(c.c6.v);
    if (scope == ConfigScope::curve) return os.str();
    os << ";n=" << cfg.n;
    if (scope == ConfigScope::dimension) return os.str();
    os << ";J=" << cfg.policy.exp_terms;
    if (scope == ConfigScope::expansion) return os.str();
    os << ";u_prec=" << cfg.policy.u_prec << ";local_terms=" << cfg.policy.local_terms_for(cfg.n)
       << ";product_cap=" << cfg.policy.product_cap;
    return os.str();
}

}  // namespace drinfeld::cli
