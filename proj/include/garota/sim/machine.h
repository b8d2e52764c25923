#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "garota/sim/isa.h"
#include "garota/sim/peripherals.h"
#include "garota/sim/types.h"

namespace garota::sim {

enum class Phase : std::uint8_t { kBooting, kRunning, kInReset };

inline constexpr std::size_t kLinkStackDepth = 16;
inline constexpr std::size_t kMemoryWords = 0x10000;

// Interrupt requests waiting for gie. One flag per source, so simultaneous
// requests from different sources are all kept.
struct PendingIrqs {
  bool gpio = false;
  bool timer = false;
  bool uart = false;

  bool any() const { return gpio || timer || uart; }
  // Gpio > Timer > Uart.
  IrqSource highest() const;
  void set(IrqSource s, bool value = true);
  bool get(IrqSource s) const;
  bool operator==(const PendingIrqs&) const = default;
};

struct MachineState {
  Address pc;
  std::array<Word, 4> regs{};
  std::vector<Word> mem = std::vector<Word>(kMemoryWords, 0);
  bool gie = false;
  bool halted = false;
  Phase phase = Phase::kBooting;
  PendingIrqs pending;
  MemoryLayout layout;
  PeripheralState peripherals;
  DmaConfig dma;
  std::vector<Address> link_stack;
  std::uint64_t cycle = 0;

  bool operator==(const MachineState&) const = default;
};

struct ImageWord {
  Address addr;
  Word value = 0;
  bool operator==(const ImageWord&) const = default;
};
using Image = std::vector<ImageWord>;

MachineState load_program(const Image& image, const MemoryLayout& layout);

// Clears CPU, interrupt, DMA and peripheral state and parks the machine at
// pc=0 for one cycle. Memory survives.
void hard_reset(MachineState& state);

enum class AccessSource : std::uint8_t { kCpu, kDma };
enum class AccessKind : std::uint8_t { kRead, kWrite };

struct AccessRecord {
  std::uint64_t cycle = 0;
  AccessSource source = AccessSource::kCpu;
  AccessKind kind = AccessKind::kRead;
  Address addr;
  Word value = 0;  // value written, or value read
  bool committed = false;
  Word before = 0;  // location contents at cycle start
  Word after = 0;   // location contents at cycle end

  bool operator==(const AccessRecord&) const = default;
};

enum class ResetCause : std::uint8_t { kNone, kMonitor, kSoftware, kFault };
std::string_view to_string(ResetCause c);

struct CycleOutcome {
  CycleSnapshot snap;
  ResetCause cause = ResetCause::kNone;
  std::string fault;
  std::vector<AccessRecord> accesses;
  std::vector<IrqSource> raised;
};

// Returns true when the monitor demands a reset for this snapshot.
using MonitorHook = std::function<bool(const CycleSnapshot&)>;

struct EventCursor {
  std::size_t gpio = 0;
  std::size_t uart = 0;
};

// One clock cycle: event injection, timer, CPU micro-step, DMA, monitor,
// then commit or reset. Either hook argument may be null.
CycleOutcome execute_cycle(MachineState& state, const MonitorHook& monitor,
                           const EventSchedule* events, EventCursor& cursor);

// Unmonitored single step with no external events.
CycleSnapshot step(MachineState& state);

// Value a LOAD at `a` would return, including memory-mapped registers.
Word peek(const MachineState& state, Address a);

}  // namespace garota::sim
