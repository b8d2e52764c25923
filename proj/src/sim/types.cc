#include "garota/sim/types.h"

#include <cstdio>
#include <string>

namespace garota::sim {

namespace {

std::string hex(Address a) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", a.value);
  return buf;
}

std::string describe(const char* name, const Region& r) {
  return std::string(name) + " [" + hex(r.min) + ", " + hex(r.max) + "]";
}

}  // namespace

MemoryLayout MemoryLayout::with_tcb_size(std::uint32_t tcb_size) {
  MemoryLayout layout;
  const std::uint32_t max = layout.tcb.min.value + tcb_size - 1;
  if (tcb_size < 4 || max > 0xFFFF) {
    throw OverlapError("tcb size " + std::to_string(tcb_size) +
                       " does not fit in the address space");
  }
  layout.tcb.max = Address(static_cast<std::uint16_t>(max));
  layout.validate();
  return layout;
}

void MemoryLayout::validate() const {
  const std::pair<const char*, const Region*> named[] = {
      {"pmem", &pmem}, {"dmem", &dmem},       {"init", &init},
      {"tcb", &tcb},   {"irq_cfg", &irq_cfg}, {"irq_table", &irq_table},
  };
  for (const auto& [name, region] : named) {
    if (region->max < region->min) {
      throw OverlapError(describe(name, *region) + " is empty");
    }
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw OverlapError(what);
  };
  require(pmem.contains(init), describe("init", init) + " not inside pmem");
  require(pmem.contains(tcb), describe("tcb", tcb) + " not inside pmem");
  require(pmem.contains(irq_table),
          describe("irq_table", irq_table) + " not inside pmem");
  require(dmem.contains(irq_cfg),
          describe("irq_cfg", irq_cfg) + " not inside dmem");
  require(!pmem.overlaps(dmem), "pmem and dmem overlap");
  require(tcb.min == init.max + 1, "tcb must start right after init");
  require(!tcb.overlaps(irq_table), "tcb overlaps the irq table");
  // Entry and exit must be distinct instructions.
  require(tcb.size() >= 4, describe("tcb", tcb) + " holds fewer than 2 instructions");
}

std::string_view to_string(IrqSource s) {
  switch (s) {
    case IrqSource::kNone: return "none";
    case IrqSource::kGpio: return "gpio";
    case IrqSource::kTimer: return "timer";
    case IrqSource::kUart: return "uart";
  }
  return "none";
}

std::optional<IrqSource> parse_irq_source(std::string_view text) {
  for (auto s : {IrqSource::kNone, IrqSource::kGpio, IrqSource::kTimer,
                 IrqSource::kUart}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

}  // namespace garota::sim
