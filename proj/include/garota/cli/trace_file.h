#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garota/monitor/guards.h"
#include "garota/sim/run.h"

namespace garota::cli {

class TraceFileError : public Error {
 public:
  using Error::Error;
};

struct TraceFileRow {
  sim::CycleSnapshot snap;
  std::array<std::optional<monitor::GuardState>, 5> guards{};  // by GuardKind

  bool operator==(const TraceFileRow&) const = default;
};

// Comma-separated trace. Lines starting with '#' carry the layout and the
// trigger source, then a header row, then one row per cycle.
struct TraceFile {
  sim::MemoryLayout layout;
  sim::IrqSource trigger = sim::IrqSource::kNone;
  std::vector<TraceFileRow> rows;

  static TraceFile of(const sim::Trace& t, sim::IrqSource trigger);
  std::vector<sim::CycleSnapshot> snapshots() const;

  bool operator==(const TraceFile&) const = default;
};

inline constexpr std::string_view kTraceHeader =
    "cycle,pc,w_en,r_en,d_addr,dma_en,dma_addr,gie,irq,irq_source,reset,"
    "pmem_guard,irqcfg_guard,gie_guard,exec_guard,confid_guard";

std::string emit_trace(const TraceFile& f);

// Throws TraceFileError (with the line number) on malformed input, on
// cycles that do not strictly increase, and on a trace with no rows.
TraceFile parse_trace(std::string_view text);

}  // namespace garota::cli
