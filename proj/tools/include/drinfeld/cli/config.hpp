#pragma once

#include <string>
#include <string_view>

#include "drinfeld/analytic.hpp"
#include "drinfeld/curve.hpp"

namespace drinfeld::cli {

/// A configuration error; `line()` is 0 for errors not tied to one line.
class ConfigError : public InvalidInput {
public:
    ConfigError(int line, const std::string& msg)
        : InvalidInput(line > 0 ? "config line " + std::to_string(line) + ": " + msg : "config: " + msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct JobConfig {
    FqConfig field;
    CurveParams curve;
    int n = 2;
    /// Upper bound on n (default 16); larger runs must raise it explicitly.
    int n_max = 16;
    TruncationPolicy policy;
    std::string cache_dir;
};

/// Parses the line-oriented `key = value` format with sections [field]
/// (p, r, modulus), [curve] (c1, c2, c3, c4, c6) and [run] (n, n_max,
/// u_prec, local_terms, product_cap, exp_terms, cache_dir).  `#` starts a
/// comment.  Required: p, c1, c2, c3, c4, c6, n.  The field and curve are
/// validated by constructing them; unknown sections or keys are rejected.
JobConfig parse_config(std::string_view text);

/// Builds F_q and E, throwing InvalidInput for a bad field or a singular curve.
CurvePtr make_curve(const JobConfig& cfg);

/// Canonical text of the parts of the configuration an artifact depends on.
enum class ConfigScope { curve, dimension, expansion, series };
std::string canonical_config(const JobConfig& cfg, ConfigScope scope);

}  // namespace drinfeld::cli
