#pragma once

#include <string>
#include <string_view>

#include "drinfeld/curve.hpp"

namespace drinfeld {

/// Parsers for the canonical text forms printed by `to_string`:
///   F_q element   `2` (r = 1) or `[d0,d1,...]` (r > 1)
///   FqPoly        `2*theta^3 + theta + 1`, `0` for zero
///   BaseElement   `(<poly in theta> ; <poly in theta>) / <poly in theta>`
///   CurveFunction `(<K poly in t> ; <K poly in t>) / <K poly in t>`, a K
///                 poly being `{<BaseElement>}*t^2 + {<BaseElement>}`
/// Whitespace between tokens is ignored.  Every parser throws InvalidInput
/// naming the offending position when the text does not match.
uint8_t parse_fq(const FiniteField& F, std::string_view text);
FqPoly parse_fq_poly(const FiniteField* F, std::string_view text, std::string_view var);
BaseElement parse_base_element(const CurvePtr& E, std::string_view text);
CurveFunction parse_curve_function(const CurvePtr& E, std::string_view text);
/// `inf` or `[<BaseElement> , <BaseElement>]`.
CurvePoint parse_curve_point(const CurvePtr& E, std::string_view text);

}  // namespace drinfeld
