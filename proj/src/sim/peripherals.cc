#include "garota/sim/peripherals.h"

namespace garota::sim {

void EventSchedule::validate() const {
  for (std::size_t i = 1; i < gpio_events.size(); ++i) {
    if (gpio_events[i].cycle <= gpio_events[i - 1].cycle) {
      throw Error("gpio event cycles must be strictly increasing");
    }
  }
  for (std::size_t i = 1; i < uart_events.size(); ++i) {
    if (uart_events[i].cycle <= uart_events[i - 1].cycle) {
      throw Error("uart event cycles must be strictly increasing");
    }
  }
}

std::optional<IrqSource> tick_timer(PeripheralState& p) {
  if ((p.tactl & kMcMask) != kMc1 || p.ccr0 == 0) return std::nullopt;
  ++p.timer_count;
  if (p.timer_count < p.ccr0) return std::nullopt;
  p.timer_count = 0;
  if (p.cctl0 & kCcie) return IrqSource::kTimer;
  return std::nullopt;
}

std::optional<IrqSource> gpio_inject(PeripheralState& p, bool level) {
  const bool previous = p.p1in & 1;
  p.p1in = static_cast<Word>((p.p1in & ~1) | (level ? 1 : 0));
  const bool armed = (p.p1ie & 1) && !(p.p1ies & 1) && !(p.p1ifg & 1);
  if (armed && !previous && level) {
    p.p1ifg |= 1;
    return IrqSource::kGpio;
  }
  return std::nullopt;
}

std::optional<IrqSource> uart_inject(PeripheralState& p, std::uint8_t byte) {
  p.uart_rxd = byte;
  p.rx_queue.push_back(byte);
  if (p.uart_ctl & kUartIenRx) return IrqSource::kUart;
  return std::nullopt;
}

DmaAccess dma_tick(const DmaConfig& dma, std::uint64_t cycle) {
  if (!dma.active) return {};
  for (const auto& entry : dma.schedule) {
    if (entry.cycle == cycle) return {true, entry.addr, entry.value};
    if (entry.cycle > cycle) break;
  }
  return {};
}

void reset_peripherals(PeripheralState& p) {
  const Word pin = p.p1in;
  p = PeripheralState{};
  p.p1in = pin;
}

Address irq_slot(const MemoryLayout& layout, IrqSource source) {
  switch (source) {
    case IrqSource::kGpio: return layout.irq_table.min;
    case IrqSource::kTimer: return layout.irq_table.min + 2;
    case IrqSource::kUart: return layout.irq_table.min + 4;
    case IrqSource::kNone: break;
  }
  throw Error("no irq slot for source none");
}

Address register_address(const MemoryLayout& layout, int offset) {
  return layout.irq_cfg.min + offset;
}

namespace {

Word* register_field(PeripheralState& p, const MemoryLayout& layout,
                     Address a) {
  if (!layout.irq_cfg.contains(a)) return nullptr;
  switch (a.value - layout.irq_cfg.min.value) {
    case reg::kP1In: return &p.p1in;
    case reg::kP1Dir: return &p.p1dir;
    case reg::kP1Ifg: return &p.p1ifg;
    case reg::kP1Ies: return &p.p1ies;
    case reg::kP1Ie: return &p.p1ie;
    case reg::kP3Dir: return &p.p3dir;
    case reg::kP3Out: return &p.p3out;
    case reg::kTactl: return &p.tactl;
    case reg::kTar: return &p.timer_count;
    case reg::kCctl0: return &p.cctl0;
    case reg::kCcr0: return &p.ccr0;
    case reg::kUartBaud: return &p.uart_baud;
    case reg::kUartCtl: return &p.uart_ctl;
    case reg::kUartRxd: return &p.uart_rxd;
    default: return nullptr;
  }
}

}  // namespace

bool read_register(const PeripheralState& p, const MemoryLayout& layout,
                   Address a, Word& out) {
  // register_field never writes through the pointer here.
  const Word* field =
      register_field(const_cast<PeripheralState&>(p), layout, a);
  if (field == nullptr) return false;
  out = *field;
  return true;
}

bool write_register(PeripheralState& p, const MemoryLayout& layout, Address a,
                    Word value) {
  Word* field = register_field(p, layout, a);
  if (field == nullptr) return false;
  // The input pin is driven externally.
  if (field != &p.p1in) *field = value;
  return true;
}

}  // namespace garota::sim
