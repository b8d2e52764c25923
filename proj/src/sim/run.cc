#include "garota/sim/run.h"

namespace garota::sim {

Trace run(MachineState& state, std::uint64_t max_cycles,
          monitor::MonitorBank& bank, const EventSchedule& events) {
  if (max_cycles == 0) throw Error("max_cycles must be positive");
  events.validate();
  Trace trace;
  trace.layout = state.layout;
  EventCursor cursor;
  monitor::BankStep last;
  const MonitorHook hook = [&](const CycleSnapshot& snap) {
    last = monitor_step(bank, snap);
    return last.reset_out;
  };
  for (std::uint64_t i = 0; i < max_cycles && !state.halted; ++i) {
    auto out = execute_cycle(state, hook, &events, cursor);
    TraceRow row;
    row.snap = out.snap;
    for (auto k : monitor::kAllGuards) {
      row.guards[static_cast<std::size_t>(k)] = bank.state(k);
    }
    row.local_reset = last.local;
    trace.rows.push_back(row);
    for (auto& a : out.accesses) trace.accesses.push_back(a);
    for (auto s : out.raised) trace.irq_requests.push_back({out.snap.cycle, s});
    if (out.cause != ResetCause::kNone) {
      trace.resets.push_back({out.snap.cycle, out.cause, out.fault});
    }
  }
  trace.halted = state.halted;
  return trace;
}

}  // namespace garota::sim
