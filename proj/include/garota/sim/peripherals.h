#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "garota/sim/types.h"

namespace garota::sim {

// Register offsets from irq_cfg.min.
namespace reg {
inline constexpr int kP1In = 0x00;
inline constexpr int kP1Dir = 0x01;
inline constexpr int kP1Ifg = 0x02;
inline constexpr int kP1Ies = 0x03;
inline constexpr int kP1Ie = 0x04;
inline constexpr int kP3Dir = 0x05;
inline constexpr int kP3Out = 0x06;
inline constexpr int kTactl = 0x10;
inline constexpr int kTar = 0x11;
inline constexpr int kCctl0 = 0x12;
inline constexpr int kCcr0 = 0x13;
inline constexpr int kUartBaud = 0x18;
inline constexpr int kUartCtl = 0x19;
inline constexpr int kUartRxd = 0x1A;
// Lives just past irq_cfg, in ordinary DMEM.
inline constexpr int kDmaCtl = 0x20;
}  // namespace reg

inline constexpr Word kMc1 = 0x0010;
inline constexpr Word kMcMask = 0x0030;
inline constexpr Word kTassel2 = 0x0200;
inline constexpr Word kCcie = 0x0010;
inline constexpr Word kUartEn = 0x0001;
inline constexpr Word kUartIenRx = 0x0002;

struct PeripheralState {
  Word p1in = 0;
  Word p1dir = 0;
  Word p1ifg = 0;
  Word p1ies = 0;
  Word p1ie = 0;
  Word p3dir = 0;
  Word p3out = 0;
  Word tactl = 0;
  Word timer_count = 0;
  Word cctl0 = 0;
  Word ccr0 = 0;
  Word uart_baud = 0;
  Word uart_ctl = 0;
  Word uart_rxd = 0;
  // Every byte received, oldest first; uart_rxd holds only the latest.
  std::vector<std::uint8_t> rx_queue;

  bool operator==(const PeripheralState&) const = default;
};

struct DmaEntry {
  std::uint64_t cycle = 0;
  Address addr;
  std::optional<Word> value;  // write when present, read otherwise

  bool operator==(const DmaEntry&) const = default;
};

struct DmaConfig {
  bool active = false;
  std::vector<DmaEntry> schedule;  // ordered by cycle

  bool operator==(const DmaConfig&) const = default;
};

struct GpioEvent {
  std::uint64_t cycle = 0;
  bool level = false;
  bool operator==(const GpioEvent&) const = default;
};

struct UartEvent {
  std::uint64_t cycle = 0;
  std::uint8_t byte = 0;
  bool operator==(const UartEvent&) const = default;
};

struct EventSchedule {
  std::vector<GpioEvent> gpio_events;
  std::vector<UartEvent> uart_events;

  // Throws Error unless cycles are strictly increasing within each list.
  void validate() const;
  bool operator==(const EventSchedule&) const = default;
};

std::optional<IrqSource> tick_timer(PeripheralState& p);
std::optional<IrqSource> gpio_inject(PeripheralState& p, bool level);
std::optional<IrqSource> uart_inject(PeripheralState& p, std::uint8_t byte);

struct DmaAccess {
  bool dma_en = false;
  Address dma_addr;
  std::optional<Word> write;
};

DmaAccess dma_tick(const DmaConfig& dma, std::uint64_t cycle);

// Power-on values; p1in follows the external pin and survives.
void reset_peripherals(PeripheralState& p);

Address irq_slot(const MemoryLayout& layout, IrqSource source);
Address register_address(const MemoryLayout& layout, int offset);

// Memory-mapped register access. Returns false when `a` is not a register.
bool read_register(const PeripheralState& p, const MemoryLayout& layout,
                   Address a, Word& out);
bool write_register(PeripheralState& p, const MemoryLayout& layout, Address a,
                    Word value);

}  // namespace garota::sim
