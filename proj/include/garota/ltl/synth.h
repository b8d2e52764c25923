#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "garota/ltl/formula.h"
#include "garota/ltl/word.h"

namespace garota::ltl {

class FragmentError : public Error {
 public:
  using Error::Error;
};

// A formula G(body) where body is propositional over atoms and X(p) terms
// with p propositional.
struct GuardedSafety {
  Formula body;
  bool lookahead = false;  // body mentions X

  // Throws FragmentError outside the fragment.
  static GuardedSafety of(const Formula& f);

  // body over (current, next); `next` is ignored without lookahead.
  bool holds(const Alphabet& alphabet, Letter current, Letter next) const;
};

// Deterministic Mealy machine over the formula's own atoms. For lookahead
// bodies the violation of position t is reported on reading letter t+1.
struct MonitorFsm {
  Alphabet alphabet;
  bool lookahead = false;
  std::size_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;  // [state][letter]
  std::vector<std::vector<char>> violation;      // [state][letter]

  std::size_t num_states() const { return next.size(); }
  std::pair<std::size_t, bool> step(std::size_t state, Letter letter) const {
    return {next[state][letter], violation[state][letter] != 0};
  }
};

// Letters over `alphabet` that extend, over the axioms' remaining atoms,
// to a letter satisfying every per-position axiom G(p). Throws FragmentError
// for an axiom with X, Error when either atom set exceeds 20.
std::vector<Letter> consistent_letters(const Alphabet& alphabet,
                                       const std::vector<Formula>& axioms);

// Throws FragmentError outside the fragment, Error above 16 atoms.
MonitorFsm synthesize_safety_monitor(const Formula& f);

}  // namespace garota::ltl
