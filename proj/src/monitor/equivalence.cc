#include "garota/monitor/equivalence.h"

namespace garota::monitor {

namespace {

using ltl::Alphabet;
using ltl::Letter;
using sim::Address;

struct Reader {
  const Alphabet& alphabet;
  Letter letter;
  bool operator()(const char* name) const {
    const auto i = alphabet.index(name);
    return i && ltl::has(letter, *i);
  }
};

Address data_address(const MemoryLayout& layout, bool tcb, bool pmem,
                     bool irqcfg) {
  if (tcb) return layout.tcb.min + 1;
  if (pmem) return layout.pmem.max;
  if (irqcfg) return layout.irq_cfg.min;
  return layout.dmem.max;
}

CycleSnapshot snapshot_of(const MemoryLayout& layout, const Alphabet& a,
                          Letter l) {
  const Reader on{a, l};
  CycleSnapshot s;
  if (on("PC_IS_ZERO")) {
    s.pc = Address(0);
  } else if (on("PC_IS_TCBMIN")) {
    s.pc = layout.tcb.min;
  } else if (on("PC_IS_TCBMAX")) {
    s.pc = layout.tcb.max;
  } else if (on("PC_IN_TCB")) {
    s.pc = layout.tcb.min + 2;
  } else {
    s.pc = Address(0xB000);
  }
  s.w_en = on("W_EN");
  s.r_en = on("R_EN");
  s.d_addr = data_address(layout, on("DADDR_IN_TCB"), on("DADDR_IN_PMEM"),
                          on("DADDR_IN_IRQCFG"));
  s.dma_en = on("DMA_EN");
  s.dma_addr = data_address(layout, on("DMAADDR_IN_TCB"),
                            on("DMAADDR_IN_PMEM"), on("DMAADDR_IN_IRQCFG"));
  s.gie = on("GIE");
  s.irq = on("IRQ");
  s.irq_source = s.irq ? sim::IrqSource::kGpio : sim::IrqSource::kNone;
  return s;
}

}  // namespace

const std::vector<std::string>& guard_atoms(GuardKind k) {
  static const std::vector<std::string> pmem = {
      "PC_IN_TCB", "W_EN", "DADDR_IN_PMEM", "DMA_EN", "DMAADDR_IN_PMEM"};
  static const std::vector<std::string> irqcfg = {
      "PC_IN_TCB", "W_EN", "DADDR_IN_IRQCFG", "DMA_EN", "DMAADDR_IN_IRQCFG"};
  static const std::vector<std::string> gie = {"PC_IN_TCB", "GIE"};
  static const std::vector<std::string> exec = {
      "PC_IN_TCB", "PC_IS_TCBMIN", "PC_IS_TCBMAX", "IRQ", "DMA_EN"};
  static const std::vector<std::string> confid = {
      "PC_IN_TCB", "R_EN", "DADDR_IN_TCB", "DMA_EN", "DMAADDR_IN_TCB"};
  switch (k) {
    case GuardKind::kPmem: return pmem;
    case GuardKind::kIrqCfg: return irqcfg;
    case GuardKind::kGie: return gie;
    case GuardKind::kExec: return exec;
    case GuardKind::kConfid: return confid;
  }
  return pmem;
}

ltl::SignalFsm guard_signal_fsm(GuardKind k, const MemoryLayout& layout) {
  ltl::SignalFsm m;
  m.name = std::string(to_string(k));
  m.atoms = guard_atoms(k);
  m.initial = static_cast<std::size_t>(initial_state(k));
  m.step = [k, layout](std::size_t q, const Alphabet& a, Letter l) {
    const auto next = guard_step(k, static_cast<GuardState>(q),
                                 snapshot_of(layout, a, l), layout);
    return std::pair{static_cast<std::size_t>(next.state), next.reset};
  };
  m.state_name = [](std::size_t q) {
    return std::string(to_string(static_cast<GuardState>(q)));
  };
  return m;
}

std::vector<GuardCheck> standard_checks(bool confidentiality) {
  const std::vector<std::string> exec = {"ltl8",    "ltl9",    "ltl10",
                                         "exec_s1", "exec_s2", "exec_s3",
                                         "exec_s4"};
  auto exec_check = [&](const std::string& f) {
    GuardCheck c{GuardKind::kExec, f, {}, true};
    for (const auto& g : exec) {
      if (g != f) c.contract.push_back(g);
    }
    return c;
  };
  std::vector<GuardCheck> out = {
      {GuardKind::kPmem, "ltl5", {}, true},
      {GuardKind::kIrqCfg, "ltl6", {}, true},
      {GuardKind::kGie, "ltl7", {"gie_enable"}, true},
      exec_check("ltl8"),
      exec_check("ltl9"),
      exec_check("ltl10"),
  };
  if (confidentiality) out.push_back({GuardKind::kConfid, "ltl11", {}, true});
  return out;
}

std::vector<GuardCheck> cross_checks() {
  return {
      {GuardKind::kPmem, "ltl6", {}, false},
      {GuardKind::kIrqCfg, "ltl5", {}, false},
      {GuardKind::kGie, "ltl10", {}, false},
      {GuardKind::kExec, "ltl7", {}, false},
      {GuardKind::kConfid, "ltl5", {}, false},
      // Without its strictness contract the gie guard is stricter than ltl7.
      {GuardKind::kGie, "ltl7", {}, false},
  };
}

GuardCheckResult run_guard_check(const GuardCheck& c,
                                 const ltl::FormulaSet& set,
                                 const MemoryLayout& layout) {
  ltl::EquivOptions options;
  for (const auto& name : c.contract) options.contract.push_back(set.get(name));
  options.axioms = set.with_prefix("_ax_");
  GuardCheckResult r{c, {}, false};
  r.result = ltl::fsm_equiv_check(guard_signal_fsm(c.guard, layout),
                                  set.get(c.formula), options);
  r.as_expected = r.result.pass == c.expect_pass;
  return r;
}

std::string to_string(const GuardCheckResult& r) {
  std::string out = std::string(to_string(r.check.guard)) + "_guard vs " +
                    r.check.formula;
  if (!r.check.contract.empty()) {
    out += " (+";
    for (const auto& c : r.check.contract) out += " " + c;
    out += ")";
  }
  out += ": ";
  if (r.result.pass) {
    out += "PASS (" + std::to_string(r.result.letters) + " letters, " +
           std::to_string(r.result.states) + " states, " +
           std::to_string(r.result.pairs) + " pairs)";
  } else {
    out += "Mismatch\n  " + ltl::to_string(*r.result.witness);
  }
  if (!r.as_expected) out += "\n  UNEXPECTED";
  return out;
}

}  // namespace garota::monitor
