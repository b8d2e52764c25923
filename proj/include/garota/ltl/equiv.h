#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "garota/ltl/formula.h"
#include "garota/ltl/synth.h"
#include "garota/ltl/word.h"

namespace garota::ltl {

inline constexpr const char* kResetAtom = "RESET";
inline constexpr const char* kPcZeroAtom = "PC_IS_ZERO";

// A finite-state observer of per-cycle signals, e.g. a guard FSM.
struct SignalFsm {
  std::string name;
  std::vector<std::string> atoms;  // atoms the machine reads
  std::size_t initial = 0;
  // (next state, output) on one letter; `alphabet` may hold extra atoms.
  std::function<std::pair<std::size_t, bool>(std::size_t, const Alphabet&,
                                              Letter)>
      step;
  std::function<std::string(std::size_t)> state_name;
};

struct EquivOptions {
  // Formulas whose violations the machine must also flag. The expected
  // output is the OR of the violation conditions of f and the contract.
  std::vector<Formula> contract;
  // Per-position constraints G(p), p propositional. Atoms outside the
  // checked alphabet are projected away existentially.
  std::vector<Formula> axioms;
  // Closed loop: RESET is the machine output OR a free environment reset,
  // every reset is followed by a PC_IS_ZERO letter and the run starts with
  // one. Open loop: RESET, if mentioned, is an ordinary input.
  bool closed_loop = true;
};

struct EquivWitness {
  Alphabet alphabet;
  std::optional<Letter> previous;
  bool previous_reset = false;
  Letter current = 0;
  std::string state;
  bool machine_output = false;
  bool expected = false;
};

std::string to_string(const EquivWitness& w);

struct EquivResult {
  bool pass = false;
  std::optional<EquivWitness> witness;
  std::size_t letters = 0;      // axiom-consistent letters
  std::size_t states = 0;       // reachable product states
  std::size_t pairs = 0;        // letter pairs compared
};

// Exhaustive comparison over all axiom-consistent consecutive letter pairs
// reachable in the product of `m` with the previous letter.
EquivResult fsm_equiv_check(const SignalFsm& m, const Formula& f,
                            const EquivOptions& options);

// Open-loop check of a synthesized monitor against a formula.
EquivResult fsm_equiv_check(const MonitorFsm& m, const Formula& f,
                            const std::vector<Formula>& axioms);

SignalFsm as_signal_fsm(const MonitorFsm& m);

}  // namespace garota::ltl
