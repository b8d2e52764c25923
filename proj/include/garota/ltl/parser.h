#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garota/ltl/formula.h"

namespace garota::ltl {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

using FormulaEnv = std::map<std::string, Formula, std::less<>>;

// Grammar, loosest first: ->, {U, W}, |, &, prefix {!, X, G, F}.
// `->`, `U` and `W` are right-associative; `&` and `|` left-associative.
// `@name` splices a formula from `env`.
Formula parse_formula(std::string_view text, const FormulaEnv& env = {});

struct NamedFormula {
  std::string name;
  Formula formula;
  std::string text;
  std::size_t line = 0;
  bool helper = false;  // name starts with '_'
};

class FormulaFileError : public Error {
 public:
  using Error::Error;
};

// `name : formula` per line; `#` starts a comment. Throws FormulaFileError
// with the line number for malformed or duplicate entries.
std::vector<NamedFormula> parse_formula_file(std::string_view text);

// Lookup by name over a parsed file.
class FormulaSet {
 public:
  FormulaSet() = default;
  explicit FormulaSet(std::vector<NamedFormula> entries);

  const std::vector<NamedFormula>& entries() const { return entries_; }
  const NamedFormula* find(std::string_view name) const;
  const Formula& get(std::string_view name) const;  // throws Error if absent
  std::vector<NamedFormula> checked() const;        // non-helper entries
  std::vector<Formula> with_prefix(std::string_view prefix) const;

 private:
  std::vector<NamedFormula> entries_;
};

}  // namespace garota::ltl
