#include <doctest.h>
#include "garota/ltl/library.h"
#include "garota/monitor/equivalence.h"

#include "garota/monitor/guards.h"

using namespace garota;
using namespace garota::monitor;
using sim::Address;

namespace {

const MemoryLayout kLayout = MemoryLayout::standard();
const Address kTcbMin = kLayout.tcb.min;
const Address kTcbMax = kLayout.tcb.max;
const Address kApp(0xB000);

CycleSnapshot at(Address pc) {
  CycleSnapshot s;
  s.pc = pc;
  return s;
}

CycleSnapshot write(Address pc, Address target) {
  auto s = at(pc);
  s.w_en = true;
  s.d_addr = target;
  return s;
}

CycleSnapshot dma(Address pc, Address target) {
  auto s = at(pc);
  s.dma_en = true;
  s.dma_addr = target;
  return s;
}

CycleSnapshot with_gie(Address pc, bool gie) {
  auto s = at(pc);
  s.gie = gie;
  return s;
}

}  // namespace

TEST_CASE("pmem guard") {
  using S = GuardState;
  CHECK(pmem_guard_step(S::kRun, write(kApp, Address(0xA050)), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(pmem_guard_step(S::kRun, write(kTcbMin + 2, Address(0xA050)), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(pmem_guard_step(S::kRun, dma(kTcbMin + 2, Address(0xA050)), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(pmem_guard_step(S::kRun, write(kApp, Address(0x0300)), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(pmem_guard_step(S::kReset, at(Address(0)), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(pmem_guard_step(S::kReset, write(kApp, Address(0xA050)), kLayout) ==
        GuardStep{S::kReset, false});
}

TEST_CASE("irqcfg guard") {
  using S = GuardState;
  CHECK(irqcfg_guard_step(S::kRun, write(kApp, Address(0x0210)), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(irqcfg_guard_step(S::kRun, dma(kTcbMin + 2, Address(0x0204)), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(irqcfg_guard_step(S::kRun, write(kApp, Address(0x0400)), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(irqcfg_guard_step(S::kRun, write(kTcbMin + 4, Address(0x0210)), kLayout) ==
        GuardStep{S::kRun, false});
}

TEST_CASE("gie guard") {
  using S = GuardState;
  CHECK(gie_guard_step(S::kOn, with_gie(kTcbMin + 2, false), kLayout) ==
        GuardStep{S::kOff, false});
  CHECK(gie_guard_step(S::kOn, with_gie(kApp, false), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(gie_guard_step(S::kOff, with_gie(kApp, false), kLayout) ==
        GuardStep{S::kOff, false});
  CHECK(gie_guard_step(S::kOff, with_gie(kTcbMax, true), kLayout) ==
        GuardStep{S::kOn, false});
  CHECK(gie_guard_step(S::kOff, with_gie(kApp, true), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(gie_guard_step(S::kOn, with_gie(kApp, true), kLayout) ==
        GuardStep{S::kOn, false});
  CHECK(gie_guard_step(S::kReset, at(Address(0)), kLayout) ==
        GuardStep{S::kOff, false});
}

TEST_CASE("exec guard") {
  using S = GuardState;
  CHECK(exec_guard_step(S::kNotTcb, at(kTcbMin), kLayout) ==
        GuardStep{S::kTcbEntry, false});
  CHECK(exec_guard_step(S::kNotTcb, at(kTcbMin + 4), kLayout) ==
        GuardStep{S::kReset, true});
  auto irq = at(kTcbMin + 8);
  irq.irq = true;
  irq.irq_source = sim::IrqSource::kTimer;
  CHECK(exec_guard_step(S::kInTcb, irq, kLayout) == GuardStep{S::kReset, true});
  CHECK(exec_guard_step(S::kInTcb, dma(kTcbMin + 8, Address(0x0400)), kLayout) ==
        GuardStep{S::kReset, true});

  SUBCASE("legal path through the TCB") {
    const Address path[] = {kApp, kTcbMin, kTcbMin + 2, kTcbMin + 4, kTcbMax,
                            kApp + 2};
    const S expected[] = {S::kNotTcb, S::kTcbEntry, S::kInTcb, S::kInTcb,
                          S::kTcbExit, S::kNotTcb};
    S s = S::kNotTcb;
    for (int i = 0; i < 6; ++i) {
      const auto next = exec_guard_step(s, at(path[i]), kLayout);
      CHECK_FALSE(next.reset);
      CHECK(next.state == expected[i]);
      s = next.state;
    }
  }
  SUBCASE("early exit") {
    CHECK(exec_guard_step(S::kInTcb, at(kApp), kLayout) ==
          GuardStep{S::kReset, true});
  }
  SUBCASE("re-entry at tcb.min from inside") {
    CHECK(exec_guard_step(S::kInTcb, at(kTcbMin), kLayout) ==
          GuardStep{S::kReset, true});
  }
  SUBCASE("interrupt right after exit") {
    auto s = at(kApp);
    s.irq = true;
    s.irq_source = sim::IrqSource::kGpio;
    CHECK(exec_guard_step(S::kTcbExit, s, kLayout) ==
          GuardStep{S::kReset, true});
    CHECK(exec_guard_step(S::kNotTcb, s, kLayout) ==
          GuardStep{S::kNotTcb, false});
  }
}

TEST_CASE("confidentiality guard") {
  using S = GuardState;
  auto read = [](Address pc, Address target) {
    auto s = at(pc);
    s.r_en = true;
    s.d_addr = target;
    return s;
  };
  CHECK(confid_guard_step(S::kRun, read(kApp, kTcbMin), kLayout) ==
        GuardStep{S::kReset, true});
  CHECK(confid_guard_step(S::kRun, read(kTcbMin + 2, kTcbMin), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(confid_guard_step(S::kRun, read(kApp, Address(0x0300)), kLayout) ==
        GuardStep{S::kRun, false});
  CHECK(confid_guard_step(S::kRun, dma(kTcbMin + 2, kTcbMin), kLayout) ==
        GuardStep{S::kReset, true});
}

TEST_CASE("monitor bank composition") {
  auto bank = MonitorBank::make(kLayout, true);
  CHECK_FALSE(monitor_step(bank, at(kApp)).reset_out);

  const auto violated = monitor_step(bank, write(kApp, Address(0x0204)));
  CHECK(violated.reset_out);
  CHECK(violated.local[static_cast<int>(GuardKind::kIrqCfg)]);
  CHECK_FALSE(violated.local[static_cast<int>(GuardKind::kPmem)]);
  CHECK(bank.irqcfg == GuardState::kReset);

  // An unrelated violation while another guard is held still resets.
  auto second = monitor_step(bank, write(kApp, Address(0xB000)));
  CHECK(second.reset_out);
  CHECK(bank.pmem == GuardState::kReset);

  const auto release = monitor_step(bank, at(Address(0)));
  CHECK_FALSE(release.reset_out);
  for (auto k : kAllGuards) CHECK(bank.state(k) == initial_state(k));

  auto off = MonitorBank::make(kLayout, false);
  CHECK_FALSE(off.enabled(GuardKind::kConfid));
  auto read_tcb = at(kApp);
  read_tcb.r_en = true;
  read_tcb.d_addr = kTcbMin;
  CHECK_FALSE(monitor_step(off, read_tcb).reset_out);
}

TEST_CASE("names round-trip") {
  for (auto k : kAllGuards) CHECK(parse_guard_kind(to_string(k)) == k);
  for (int i = 0; i < 8; ++i) {
    const auto s = static_cast<GuardState>(i);
    CHECK(parse_guard_state(to_string(s)) == s);
  }
}

TEST_CASE("equivalence: every guard matches its formula") {
  const auto& set = ltl::builtin_formulas();
  const auto checks = standard_checks(true);
  CHECK(checks.size() == 7);
  for (const auto& c : checks) {
    const auto r = run_guard_check(c, set, kLayout);
    INFO(to_string(r));
    CHECK(r.result.pass);
    CHECK(r.as_expected);
  }
  CHECK(standard_checks(false).size() == 6);
}

TEST_CASE("equivalence: cross pairings produce witnesses") {
  const auto& set = ltl::builtin_formulas();
  for (const auto& c : cross_checks()) {
    const auto r = run_guard_check(c, set, kLayout);
    INFO(to_string(r));
    CHECK_FALSE(r.result.pass);
    CHECK(r.result.witness.has_value());
  }
  // pmem guard vs ltl6: the witness is an untrusted irq_cfg write.
  const auto r = run_guard_check({GuardKind::kPmem, "ltl6", {}, false}, set, kLayout);
  REQUIRE(r.result.witness);
  const auto& w = *r.result.witness;
  auto on = [&](const char* name) {
    return ltl::has(w.current, *w.alphabet.index(name));
  };
  const bool irqcfg_write = (on("W_EN") && on("DADDR_IN_IRQCFG")) ||
                            (on("DMA_EN") && on("DMAADDR_IN_IRQCFG"));
  CHECK(irqcfg_write);
  CHECK(w.expected);
  CHECK_FALSE(w.machine_output);
}

TEST_CASE("equivalence: resized TCB gives the same verdicts") {
  const auto& set = ltl::builtin_formulas();
  const auto layout = MemoryLayout::with_tcb_size(4);
  for (const auto& c : standard_checks(true)) {
    CHECK(run_guard_check(c, set, layout).result.pass);
  }
}
