#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "garota/sim/types.h"

namespace garota::monitor {

using sim::CycleSnapshot;
using sim::MemoryLayout;

enum class GuardKind : std::uint8_t { kPmem, kIrqCfg, kGie, kExec, kConfid };

inline constexpr std::array<GuardKind, 5> kAllGuards = {
    GuardKind::kPmem, GuardKind::kIrqCfg, GuardKind::kGie, GuardKind::kExec,
    GuardKind::kConfid};

enum class GuardState : std::uint8_t {
  kRun,
  kReset,
  kOn,
  kOff,
  kNotTcb,
  kTcbEntry,
  kInTcb,
  kTcbExit,
};

std::string_view to_string(GuardKind k);
std::optional<GuardKind> parse_guard_kind(std::string_view text);
std::string_view to_string(GuardState s);
std::optional<GuardState> parse_guard_state(std::string_view text);

GuardState initial_state(GuardKind k);

struct GuardStep {
  GuardState state;
  bool reset = false;

  bool operator==(const GuardStep&) const = default;
};

// Every guard leaves any state, RESET included, on a pc=0 snapshot.
GuardStep pmem_guard_step(GuardState s, const CycleSnapshot& snap,
                          const MemoryLayout& layout);
GuardStep irqcfg_guard_step(GuardState s, const CycleSnapshot& snap,
                            const MemoryLayout& layout);
GuardStep gie_guard_step(GuardState s, const CycleSnapshot& snap,
                         const MemoryLayout& layout);
GuardStep exec_guard_step(GuardState s, const CycleSnapshot& snap,
                          const MemoryLayout& layout);
GuardStep confid_guard_step(GuardState s, const CycleSnapshot& snap,
                            const MemoryLayout& layout);

GuardStep guard_step(GuardKind k, GuardState s, const CycleSnapshot& snap,
                     const MemoryLayout& layout);

struct MonitorBank {
  MemoryLayout layout;
  GuardState pmem = GuardState::kRun;
  GuardState irqcfg = GuardState::kRun;
  GuardState gie = GuardState::kOff;
  GuardState exec = GuardState::kNotTcb;
  std::optional<GuardState> confid;
  bool reset_out = false;

  static MonitorBank make(const MemoryLayout& layout, bool confidentiality);

  bool enabled(GuardKind k) const;
  std::optional<GuardState> state(GuardKind k) const;

  bool operator==(const MonitorBank&) const = default;
};

struct BankStep {
  bool reset_out = false;
  std::array<bool, 5> local{};  // indexed by GuardKind
};

// Steps every enabled guard on the same snapshot; reset_out is their OR.
BankStep monitor_step(MonitorBank& bank, const CycleSnapshot& snap);

}  // namespace garota::monitor
