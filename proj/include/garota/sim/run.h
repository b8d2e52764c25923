#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garota/monitor/guards.h"
#include "garota/sim/machine.h"

namespace garota::sim {

struct TraceRow {
  CycleSnapshot snap;
  // Guard states after the step; empty for a disabled guard.
  std::array<std::optional<monitor::GuardState>, 5> guards{};
  std::array<bool, 5> local_reset{};

  bool operator==(const TraceRow&) const = default;
};

struct IrqRequest {
  std::uint64_t cycle = 0;
  IrqSource source = IrqSource::kNone;
  bool operator==(const IrqRequest&) const = default;
};

struct ResetRecord {
  std::uint64_t cycle = 0;
  ResetCause cause = ResetCause::kNone;
  std::string detail;
  bool operator==(const ResetRecord&) const = default;
};

struct Trace {
  MemoryLayout layout;
  std::vector<TraceRow> rows;
  std::vector<AccessRecord> accesses;
  std::vector<IrqRequest> irq_requests;
  std::vector<ResetRecord> resets;
  bool halted = false;

  bool operator==(const Trace&) const = default;
};

// Runs until HALT or `max_cycles` cycles. The DMA schedule is taken from
// state.dma; `state` is left at the final machine state.
Trace run(MachineState& state, std::uint64_t max_cycles,
          monitor::MonitorBank& bank, const EventSchedule& events);

}  // namespace garota::sim
