#pragma once

#include <string>
#include <vector>

#include "garota/ltl/equiv.h"
#include "garota/ltl/parser.h"
#include "garota/monitor/guards.h"

namespace garota::monitor {

// Atoms each guard observes.
const std::vector<std::string>& guard_atoms(GuardKind k);

// Adapter: a letter becomes a representative snapshot of `layout` (pc,
// d_addr and dma_addr chosen inside the regions the atoms name), which is
// then fed to the guard's step function. Atoms absent from the alphabet
// read as false.
ltl::SignalFsm guard_signal_fsm(GuardKind k, const MemoryLayout& layout);

struct GuardCheck {
  GuardKind guard;
  std::string formula;
  // Further formulas whose violations the guard also rejects.
  std::vector<std::string> contract;
  bool expect_pass = true;
};

// One check per mandatory formula, plus the confidentiality one on request.
std::vector<GuardCheck> standard_checks(bool confidentiality);

// Deliberately mismatched pairs; each must produce a witness.
std::vector<GuardCheck> cross_checks();

struct GuardCheckResult {
  GuardCheck check;
  ltl::EquivResult result;
  bool as_expected = false;
};

// Axioms are the set's `_ax_*` helpers.
GuardCheckResult run_guard_check(const GuardCheck& c, const ltl::FormulaSet& set,
                                 const MemoryLayout& layout);

std::string to_string(const GuardCheckResult& r);

}  // namespace garota::monitor
