#pragma once

#include <string_view>

#include "garota/ltl/parser.h"

namespace garota::ltl {

// Text of the shipped garota.ltl, embedded at build time.
std::string_view builtin_formula_text();

// Parsed once; the set is immutable afterwards.
const FormulaSet& builtin_formulas();

}  // namespace garota::ltl
