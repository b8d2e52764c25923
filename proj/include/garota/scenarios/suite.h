#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garota/scenarios/assembler.h"
#include "garota/scenarios/scenario.h"
#include "garota/sim/run.h"

namespace garota::scenarios {

enum class CheckStatus : std::uint8_t { kPass, kFail, kInconclusive };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string check;
  CheckStatus status = CheckStatus::kFail;
  std::string detail;
};

struct RunResult {
  Scenario scenario;
  sim::Trace trace;
  std::vector<CheckResult> checks;
  bool pass = false;  // every check passed
};

struct CheckContext {
  const Scenario& scenario;
  const sim::Trace& trace;
  const sim::MachineState& final_state;
  const SymbolTable& symbols;
};

// Named checks for [expect]:
//   no-resets | no-guard-fired | guard-fired GUARD | sw-reset | requests N
//   trigger-serviced | retrigger | tcb-completes | write-blocked | ltl-clean
//   store-seen ADDR VALUE | mem ADDR VALUE | mem-at-least ADDR VALUE
// ADDR and VALUE are assembler expressions over the program's symbols.
CheckResult evaluate_check(std::string_view check, const CheckContext& ctx);

// Assembles, loads and runs the scenario under the monitor, then evaluates
// its checks. Throws AssemblyError or LayoutViolation for a bad program.
RunResult run_scenario(const Scenario& s);

struct SuiteEntry {
  std::string name;  // scenario or scenario+attack
  Scenario scenario;
};

// Every built-in scenario, benign and under each applicable attack, in a
// fixed order. `filter` keeps entries whose name matches the glob (or
// contains the text when it has no wildcard).
std::vector<SuiteEntry> suite_entries(std::optional<std::string_view> filter = {});

struct RunReport {
  std::vector<RunResult> results;
  std::size_t passed() const;
  bool all_passed() const { return passed() == results.size(); }
};

// Entries run in parallel; results keep the entry order.
RunReport run_suite(std::optional<std::string_view> filter = {},
                    unsigned threads = 0);

std::string format_result(const RunResult& r);
std::string format_report(const RunReport& r);

}  // namespace garota::scenarios
