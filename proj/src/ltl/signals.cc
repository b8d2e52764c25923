#include "garota/ltl/signals.h"

namespace garota::ltl {

namespace {

enum Bit : std::size_t {
  kWEn,
  kREn,
  kDaddrInPmem,
  kDaddrInIrqcfg,
  kDaddrInTcb,
  kDmaEn,
  kDmaaddrInPmem,
  kDmaaddrInIrqcfg,
  kDmaaddrInTcb,
  kPcInTcb,
  kPcIsTcbmin,
  kPcIsTcbmax,
  kPcIsZero,
  kGie,
  kIrq,
  kReset,
  kTrigger,
};

}  // namespace

const Alphabet& signal_alphabet() {
  static const Alphabet a({"W_EN", "R_EN", "DADDR_IN_PMEM", "DADDR_IN_IRQCFG",
                           "DADDR_IN_TCB", "DMA_EN", "DMAADDR_IN_PMEM",
                           "DMAADDR_IN_IRQCFG", "DMAADDR_IN_TCB", "PC_IN_TCB",
                           "PC_IS_TCBMIN", "PC_IS_TCBMAX", "PC_IS_ZERO", "GIE",
                           "IRQ", "RESET", "TRIGGER"});
  return a;
}

Letter signal_letter(const sim::CycleSnapshot& s,
                     const sim::MemoryLayout& layout, sim::IrqSource trigger) {
  Letter l = 0;
  auto set = [&l](Bit b, bool v) { l = with(l, b, v); };
  set(kWEn, s.w_en);
  set(kREn, s.r_en);
  set(kDaddrInPmem, layout.pmem.contains(s.d_addr));
  set(kDaddrInIrqcfg, layout.irq_cfg.contains(s.d_addr));
  set(kDaddrInTcb, layout.tcb.contains(s.d_addr));
  set(kDmaEn, s.dma_en);
  set(kDmaaddrInPmem, layout.pmem.contains(s.dma_addr));
  set(kDmaaddrInIrqcfg, layout.irq_cfg.contains(s.dma_addr));
  set(kDmaaddrInTcb, layout.tcb.contains(s.dma_addr));
  set(kPcInTcb, layout.tcb.contains(s.pc));
  set(kPcIsTcbmin, s.pc == layout.tcb.min);
  set(kPcIsTcbmax, s.pc == layout.tcb.max);
  set(kPcIsZero, s.pc.value == 0);
  set(kGie, s.gie);
  set(kIrq, s.irq);
  set(kReset, s.reset);
  set(kTrigger, s.irq && trigger != sim::IrqSource::kNone &&
                    s.irq_source == trigger);
  return l;
}

std::vector<Letter> signal_trace(const std::vector<sim::CycleSnapshot>& rows,
                                 const sim::MemoryLayout& layout,
                                 sim::IrqSource trigger) {
  std::vector<Letter> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(signal_letter(r, layout, trigger));
  return out;
}

}  // namespace garota::ltl
