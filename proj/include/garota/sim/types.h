#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "garota/error.h"

namespace garota::sim {

using Word = std::uint16_t;

// A 16-bit word index into the 64K-word address space.
struct Address {
  std::uint16_t value = 0;

  constexpr Address() = default;
  constexpr explicit Address(std::uint16_t v) : value(v) {}

  friend constexpr bool operator==(Address, Address) = default;
  friend constexpr auto operator<=>(Address, Address) = default;
};

constexpr Address operator+(Address a, int offset) {
  return Address(static_cast<std::uint16_t>(a.value + offset));
}

// Inclusive address range [min, max].
struct Region {
  Address min;
  Address max;

  constexpr bool contains(Address a) const { return min <= a && a <= max; }
  constexpr bool contains(const Region& r) const {
    return contains(r.min) && contains(r.max);
  }
  constexpr bool overlaps(const Region& r) const {
    return !(max < r.min || r.max < min);
  }
  constexpr std::uint32_t size() const {
    return static_cast<std::uint32_t>(max.value) - min.value + 1;
  }

  friend constexpr bool operator==(const Region&, const Region&) = default;
};

class LayoutViolation : public Error {
 public:
  using Error::Error;
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

struct MemoryLayout {
  Region pmem{Address(0xA000), Address(0xFFFF)};
  Region dmem{Address(0x0200), Address(0x13FF)};
  Region init{Address(0xA000), Address(0xA0FF)};
  Region tcb{Address(0xA100), Address(0xA8FF)};
  Region irq_cfg{Address(0x0200), Address(0x021F)};
  Region irq_table{Address(0xFFE0), Address(0xFFFF)};

  static MemoryLayout standard() { return {}; }

  // Default layout with the TCB resized to `tcb_size` address units.
  static MemoryLayout with_tcb_size(std::uint32_t tcb_size);

  // Throws OverlapError when the containment/adjacency rules do not hold.
  void validate() const;

  friend bool operator==(const MemoryLayout&, const MemoryLayout&) = default;
};

enum class IrqSource : std::uint8_t { kNone, kGpio, kTimer, kUart };

std::string_view to_string(IrqSource s);
std::optional<IrqSource> parse_irq_source(std::string_view text);

// The signal vector observed by the hardware monitor in one cycle.
struct CycleSnapshot {
  std::uint64_t cycle = 0;
  Address pc;
  bool w_en = false;
  bool r_en = false;
  Address d_addr;
  bool dma_en = false;
  Address dma_addr;
  bool gie = false;
  bool irq = false;
  IrqSource irq_source = IrqSource::kNone;
  bool reset = false;

  friend bool operator==(const CycleSnapshot&, const CycleSnapshot&) = default;
};

}  // namespace garota::sim
