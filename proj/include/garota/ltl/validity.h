#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garota/ltl/formula.h"
#include "garota/ltl/parser.h"
#include "garota/ltl/word.h"

namespace garota::ltl {

enum class SearchMethod : std::uint8_t {
  kAuto,       // enumeration when the word space is small, else SAT
  kEnumerate,  // every axiom-consistent lasso, checked with eval_on_lasso
  kSat,        // one SAT query per (length, loop start)
};

struct ValidityOptions {
  // Per-position constraints G(p); those mentioning atoms outside the
  // formulas are dropped.
  std::vector<Formula> axioms;
  SearchMethod method = SearchMethod::kAuto;
  // Random lassos tried past the exhaustive bound, lengths up to
  // max_total_len + sample_extra_len.
  std::size_t samples = 0;
  std::size_t sample_extra_len = 4;
  std::uint64_t seed = 0;
};

struct ValidityResult {
  Alphabet alphabet;
  std::size_t bound = 0;
  std::optional<LassoWord> counterexample;
  std::size_t queries = 0;  // SAT queries or enumerated words
  std::size_t samples = 0;

  bool valid_up_to_bound() const { return !counterexample.has_value(); }
};

// "NoCounterexampleUpTo(6)" or "Counterexample(prefix . (loop)^w)".
std::string to_string(const ValidityResult& r);

// Searches lassos with |prefix|+|loop| <= max_total_len satisfying every
// antecedent and the negated consequent, shortest first. A returned word is
// re-checked with eval_on_lasso. Throws Error if max_total_len < 2.
ValidityResult check_validity(const std::vector<Formula>& antecedents,
                              const Formula& consequent,
                              std::size_t max_total_len,
                              const ValidityOptions& options = {});

enum class TheoremId : std::uint8_t { kT1, kT2, kT1Weakened, kT2Weakened };

std::string to_string(TheoremId id);
TheoremId parse_theorem(const std::string& s);  // throws Error

struct TheoremSpec {
  TheoremId id;
  std::vector<std::string> antecedents;  // names in the formula set
  std::string consequent;
  bool expect_valid = true;
};

TheoremSpec theorem_spec(TheoremId id);

struct TheoremReport {
  TheoremId id;
  TheoremSpec spec;
  ValidityResult result;
  bool as_expected = false;
  double seconds = 0.0;
};

// Uses the set's `_ax_*` helpers as axioms.
TheoremReport theorem_check(TheoremId id, const FormulaSet& set,
                            std::size_t bound,
                            const ValidityOptions& base = {});

std::string to_string(const TheoremReport& r);

}  // namespace garota::ltl
