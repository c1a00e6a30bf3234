#pragma once

#include "drinfeld/analytic.hpp"
#include "drinfeld/cli/config.hpp"
#include "drinfeld/verify.hpp"

namespace drinfeld::cli {

/// The worked example: F_3, y^2 = t^3 - t - 1, n = 2.
bool is_worked_example(const JobConfig& cfg);
JobConfig worked_example_config();

/// Exact comparisons with the worked-example closed forms, all by
/// cross-multiplication: V, xi, f, g_1, g_2, a_1, d[theta] and E_theta.
CheckGroup worked_example_algebra(const ShtukaData& sh, const MotiveBasis& basis, const AndersonModule& M);

/// The expected worked-example value of Pi_2[last]/pi_rho^2, -(eta^2+1)^2/(eta^5-eta^3-eta).
BaseElement worked_example_ratio(const CurvePtr& E);

/// Pi_2[last]/pi_rho^2 against that closed form through `min_agree`
/// coefficients, and the residual xi power -2.
CheckGroup worked_example_period(const PeriodResult& P, const CurvePtr& E, const TruncationPolicy& policy,
                                 int min_agree);

}  // namespace drinfeld::cli
