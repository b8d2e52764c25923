#include "garota/scenarios/attacks.h"

#include "garota/sim/peripherals.h"

namespace garota::scenarios {

namespace {

using monitor::GuardKind;
using sim::IrqSource;

constexpr sim::Word kAttackBase = 0xC000;
constexpr sim::Word kPmemTarget = 0xC800;  // unused PMEM word
constexpr sim::Word kDmemScratch = 0x0400;

// Register whose clearing silences the trigger.
const char* enable_register(IrqSource s) {
  switch (s) {
    case IrqSource::kGpio: return "P1IE";
    case IrqSource::kTimer: return "CCTL0";
    case IrqSource::kUart: return "UART_CTL";
    case IrqSource::kNone: break;
  }
  throw ScenarioError("scenario has no trigger");
}

int enable_offset(IrqSource s) {
  switch (s) {
    case IrqSource::kGpio: return sim::reg::kP1Ie;
    case IrqSource::kTimer: return sim::reg::kCctl0;
    case IrqSource::kUart: return sim::reg::kUartCtl;
    case IrqSource::kNone: break;
  }
  throw ScenarioError("scenario has no trigger");
}

const char* vector_symbol(IrqSource s) {
  switch (s) {
    case IrqSource::kGpio: return "VEC_GPIO";
    case IrqSource::kTimer: return "VEC_TIMER";
    case IrqSource::kUart: return "VEC_UART";
    case IrqSource::kNone: break;
  }
  throw ScenarioError("scenario has no trigger");
}

std::string body_of(const AttackSpec& a, const Scenario& base) {
  const std::string& n = a.name;
  if (n == "app-writes-pmem") return "    MOVI r0, 0xDEAD\n    STORE r0, 0xC800\n";
  if (n == "app-writes-tcb") return "    MOVI r0, 0xDEAD\n    STORE r0, TCB_MIN+2\n";
  if (n == "app-writes-irqtable") {
    return "    MOVI r0, evil\n    STORE r0, " +
           std::string(vector_symbol(base.trigger)) + "\n";
  }
  if (n == "app-writes-irqcfg") {
    return "    MOVI r0, 0\n    STORE r0, " +
           std::string(enable_register(base.trigger)) + "\n";
  }
  if (n == "dma-writes-pmem" || n == "dma-writes-irqcfg" ||
      n == "dma-during-tcb") {
    return "    MOVI r0, 1\n    STORE r0, DMA_CTL\n";
  }
  if (n == "app-clears-gie") return "    DINT\n";
  if (n == "jump-mid-tcb") return "    JMP TCB_MIN+4\n";
  if (n == "irq-during-tcb") {
    // Re-enter the TCB back to back so the next trigger arrives inside it.
    return "again:\n    MOVI r3, 1\n    CALL TCB_MIN\n    JMP again\n";
  }
  if (n == "app-reads-tcb") return "    LOAD r0, TCB_MIN+2\n";
  throw UnknownAttack("no code for attack '" + n + "'");
}

std::vector<sim::DmaEntry> dma_of(const AttackSpec& a, const Scenario& base) {
  const auto layout = base.layout();
  sim::Address addr;
  std::optional<sim::Word> value;
  if (a.name == "dma-writes-pmem") {
    addr = sim::Address(kPmemTarget);
    value = 0xBEEF;
  } else if (a.name == "dma-writes-irqcfg") {
    addr = sim::register_address(layout, enable_offset(base.trigger));
    value = 0;
  } else if (a.name == "dma-during-tcb") {
    addr = sim::Address(kDmemScratch);
  } else {
    return {};
  }
  // One transfer per cycle; only acts once DMA_CTL is set.
  std::vector<sim::DmaEntry> out;
  for (std::uint64_t c = 0; c < base.max_cycles; ++c) out.push_back({c, addr, value});
  return out;
}

}  // namespace

const std::vector<AttackSpec>& attack_catalog() {
  static const std::vector<AttackSpec> catalog = {
      {"app-writes-pmem", GuardKind::kPmem, AttackMechanism::kCode, false,
       "untrusted STORE to a PMEM word"},
      {"app-writes-tcb", GuardKind::kPmem, AttackMechanism::kCode, false,
       "untrusted STORE into the TCB"},
      {"app-writes-irqtable", GuardKind::kPmem, AttackMechanism::kCode, false,
       "untrusted STORE redirecting the trigger vector"},
      {"app-writes-irqcfg", GuardKind::kIrqCfg, AttackMechanism::kCode, false,
       "untrusted STORE disabling the trigger"},
      {"dma-writes-pmem", GuardKind::kPmem, AttackMechanism::kCodeAndDma, false,
       "DMA write to a PMEM word"},
      {"dma-writes-irqcfg", GuardKind::kIrqCfg, AttackMechanism::kCodeAndDma,
       false, "DMA write disabling the trigger"},
      {"app-clears-gie", GuardKind::kGie, AttackMechanism::kCode, false,
       "DINT outside the TCB"},
      {"jump-mid-tcb", GuardKind::kExec, AttackMechanism::kCode, false,
       "jump into the middle of the TCB"},
      {"irq-during-tcb", GuardKind::kExec, AttackMechanism::kCode, false,
       "trigger pending while the TCB runs, dispatched inside it"},
      {"dma-during-tcb", GuardKind::kExec, AttackMechanism::kCodeAndDma, false,
       "DMA active when the TCB is entered"},
      {"app-reads-tcb", GuardKind::kConfid, AttackMechanism::kCode, true,
       "untrusted LOAD from the TCB"},
  };
  return catalog;
}

const AttackSpec& find_attack(std::string_view name) {
  for (const auto& a : attack_catalog()) {
    if (a.name == name) return a;
  }
  throw UnknownAttack("unknown attack '" + std::string(name) + "'");
}

bool applicable(const AttackSpec& a, const Scenario& base) {
  return !a.confidentiality_only || base.confidentiality;
}

Scenario apply_attack(const Scenario& base, const AttackSpec& a) {
  if (!applicable(a, base)) {
    throw ScenarioError("attack '" + a.name + "' needs the confidentiality guard");
  }
  Scenario s = base;
  const auto hook = s.program.find(kAttackHook);
  if (hook == std::string::npos) {
    throw ScenarioError("program of '" + base.name + "' has no attack hook");
  }
  s.program.replace(hook, kAttackHook.size(), "JMP attack ; attack-hook");
  s.program += "\n; attack: " + a.name + " (" + a.summary + ")\n";
  s.program += ".equ ATTACK_FLAG 0x0310\n";
  s.program += ".org " + std::to_string(kAttackBase) + "\n";
  s.program +=
      "attack:\n"
      "    LOAD r0, ATTACK_FLAG\n"
      "    CMPBR r0, main_body     ; only once\n"
      "    MOVI r0, 1\n"
      "    STORE r0, ATTACK_FLAG\n";
  s.program += body_of(a, base);
  s.program += "    JMP main_body\n";
  if (a.name == "app-writes-irqtable") s.program += "evil:\n    RETI\n";
  s.dma = dma_of(a, base);
  s.name = base.name + "+" + a.name;
  s.expect = {"guard-fired " + std::string(monitor::to_string(a.expected_guard)),
              "write-blocked", "retrigger", "tcb-completes", "trigger-serviced",
              "ltl-clean"};
  return s;
}

}  // namespace garota::scenarios
