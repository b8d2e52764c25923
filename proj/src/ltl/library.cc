#include "garota/ltl/library.h"

namespace garota::ltl {

extern const char kBuiltinFormulaText[];

std::string_view builtin_formula_text() { return kBuiltinFormulaText; }

const FormulaSet& builtin_formulas() {
  static const FormulaSet set(parse_formula_file(builtin_formula_text()));
  return set;
}

}  // namespace garota::ltl
