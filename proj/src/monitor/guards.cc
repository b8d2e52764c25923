#include "garota/monitor/guards.h"

namespace garota::monitor {

namespace {

constexpr std::array<std::string_view, 5> kGuardNames = {
    "pmem", "irqcfg", "gie", "exec", "confid"};
constexpr std::array<std::string_view, 8> kStateNames = {
    "RUN", "RESET", "ON", "OFF", "NotTcb", "TcbEntry", "InTcb", "TcbExit"};

bool released(const CycleSnapshot& snap) { return snap.pc.value == 0; }

GuardStep to_reset() { return {GuardState::kReset, true}; }

// Shared shape of the pmem, irqcfg and confid guards: RUN until `violated`.
template <typename Pred>
GuardStep run_reset_guard(GuardKind kind, GuardState s,
                          const CycleSnapshot& snap, Pred violated) {
  if (released(snap)) return {initial_state(kind), false};
  if (s == GuardState::kReset) return {s, false};
  if (violated()) return to_reset();
  return {GuardState::kRun, false};
}

}  // namespace

std::string_view to_string(GuardKind k) {
  return kGuardNames[static_cast<std::size_t>(k)];
}

std::optional<GuardKind> parse_guard_kind(std::string_view text) {
  for (auto k : kAllGuards) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(GuardState s) {
  return kStateNames[static_cast<std::size_t>(s)];
}

std::optional<GuardState> parse_guard_state(std::string_view text) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == text) return static_cast<GuardState>(i);
  }
  return std::nullopt;
}

GuardState initial_state(GuardKind k) {
  switch (k) {
    case GuardKind::kGie: return GuardState::kOff;
    case GuardKind::kExec: return GuardState::kNotTcb;
    default: return GuardState::kRun;
  }
}

GuardStep pmem_guard_step(GuardState s, const CycleSnapshot& snap,
                          const MemoryLayout& layout) {
  return run_reset_guard(GuardKind::kPmem, s, snap, [&] {
    return (!layout.tcb.contains(snap.pc) && snap.w_en &&
            layout.pmem.contains(snap.d_addr)) ||
           (snap.dma_en && layout.pmem.contains(snap.dma_addr));
  });
}

GuardStep irqcfg_guard_step(GuardState s, const CycleSnapshot& snap,
                            const MemoryLayout& layout) {
  return run_reset_guard(GuardKind::kIrqCfg, s, snap, [&] {
    return (!layout.tcb.contains(snap.pc) && snap.w_en &&
            layout.irq_cfg.contains(snap.d_addr)) ||
           (snap.dma_en && layout.irq_cfg.contains(snap.dma_addr));
  });
}

GuardStep confid_guard_step(GuardState s, const CycleSnapshot& snap,
                            const MemoryLayout& layout) {
  return run_reset_guard(GuardKind::kConfid, s, snap, [&] {
    return (!layout.tcb.contains(snap.pc) && snap.r_en &&
            layout.tcb.contains(snap.d_addr)) ||
           (snap.dma_en && layout.tcb.contains(snap.dma_addr));
  });
}

GuardStep gie_guard_step(GuardState s, const CycleSnapshot& snap,
                         const MemoryLayout& layout) {
  if (released(snap)) return {GuardState::kOff, false};
  const bool in_tcb = layout.tcb.contains(snap.pc);
  switch (s) {
    case GuardState::kOn:
      if (snap.gie) return {GuardState::kOn, false};
      return in_tcb ? GuardStep{GuardState::kOff, false} : to_reset();
    case GuardState::kOff:
      if (!snap.gie) return {GuardState::kOff, false};
      return in_tcb ? GuardStep{GuardState::kOn, false} : to_reset();
    default:
      return {GuardState::kReset, false};
  }
}

GuardStep exec_guard_step(GuardState s, const CycleSnapshot& snap,
                          const MemoryLayout& layout) {
  if (released(snap)) return {GuardState::kNotTcb, false};
  const auto& tcb = layout.tcb;
  const bool quiet = !snap.irq && !snap.dma_en;
  const bool at_min = snap.pc == tcb.min;
  const bool at_max = snap.pc == tcb.max;
  const bool inside = tcb.contains(snap.pc);
  const bool mid = inside && !at_min && !at_max;
  switch (s) {
    case GuardState::kNotTcb:
      if (!inside) return {GuardState::kNotTcb, false};
      if (at_min && quiet) return {GuardState::kTcbEntry, false};
      return to_reset();
    case GuardState::kTcbEntry:
      if (at_min && quiet) return {GuardState::kTcbEntry, false};
      if (mid && quiet) return {GuardState::kInTcb, false};
      return to_reset();
    case GuardState::kInTcb:
      if (mid && quiet) return {GuardState::kInTcb, false};
      if (at_max && quiet) return {GuardState::kTcbExit, false};
      return to_reset();
    case GuardState::kTcbExit:
      if (at_max && quiet) return {GuardState::kTcbExit, false};
      if (!inside && quiet) return {GuardState::kNotTcb, false};
      return to_reset();
    default:
      return {GuardState::kReset, false};
  }
}

GuardStep guard_step(GuardKind k, GuardState s, const CycleSnapshot& snap,
                     const MemoryLayout& layout) {
  switch (k) {
    case GuardKind::kPmem: return pmem_guard_step(s, snap, layout);
    case GuardKind::kIrqCfg: return irqcfg_guard_step(s, snap, layout);
    case GuardKind::kGie: return gie_guard_step(s, snap, layout);
    case GuardKind::kExec: return exec_guard_step(s, snap, layout);
    case GuardKind::kConfid: return confid_guard_step(s, snap, layout);
  }
  return {s, false};
}

MonitorBank MonitorBank::make(const MemoryLayout& layout,
                              bool confidentiality) {
  MonitorBank bank;
  bank.layout = layout;
  if (confidentiality) bank.confid = GuardState::kRun;
  return bank;
}

bool MonitorBank::enabled(GuardKind k) const {
  return k != GuardKind::kConfid || confid.has_value();
}

std::optional<GuardState> MonitorBank::state(GuardKind k) const {
  switch (k) {
    case GuardKind::kPmem: return pmem;
    case GuardKind::kIrqCfg: return irqcfg;
    case GuardKind::kGie: return gie;
    case GuardKind::kExec: return exec;
    case GuardKind::kConfid: return confid;
  }
  return std::nullopt;
}

BankStep monitor_step(MonitorBank& bank, const CycleSnapshot& snap) {
  BankStep out;
  auto advance = [&](GuardKind k, GuardState& s) {
    const auto next = guard_step(k, s, snap, bank.layout);
    s = next.state;
    out.local[static_cast<std::size_t>(k)] = next.reset;
    out.reset_out = out.reset_out || next.reset;
  };
  advance(GuardKind::kPmem, bank.pmem);
  advance(GuardKind::kIrqCfg, bank.irqcfg);
  advance(GuardKind::kGie, bank.gie);
  advance(GuardKind::kExec, bank.exec);
  if (bank.confid) advance(GuardKind::kConfid, *bank.confid);
  bank.reset_out = out.reset_out;
  return out;
}

}  // namespace garota::monitor
