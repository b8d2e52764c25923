#include "garota/sim/machine.h"

#include <cstdio>
#include <optional>
#include <utility>

namespace garota::sim {

IrqSource PendingIrqs::highest() const {
  if (gpio) return IrqSource::kGpio;
  if (timer) return IrqSource::kTimer;
  if (uart) return IrqSource::kUart;
  return IrqSource::kNone;
}

void PendingIrqs::set(IrqSource s, bool value) {
  switch (s) {
    case IrqSource::kGpio: gpio = value; break;
    case IrqSource::kTimer: timer = value; break;
    case IrqSource::kUart: uart = value; break;
    case IrqSource::kNone: break;
  }
}

bool PendingIrqs::get(IrqSource s) const {
  switch (s) {
    case IrqSource::kGpio: return gpio;
    case IrqSource::kTimer: return timer;
    case IrqSource::kUart: return uart;
    case IrqSource::kNone: break;
  }
  return false;
}

std::string_view to_string(ResetCause c) {
  switch (c) {
    case ResetCause::kNone: return "none";
    case ResetCause::kMonitor: return "monitor";
    case ResetCause::kSoftware: return "software";
    case ResetCause::kFault: return "fault";
  }
  return "none";
}

MachineState load_program(const Image& image, const MemoryLayout& layout) {
  layout.validate();
  MachineState state;
  state.layout = layout;
  for (const auto& word : image) {
    if (!layout.pmem.contains(word.addr) && !layout.dmem.contains(word.addr)) {
      char buf[96];
      std::snprintf(buf, sizeof buf,
                    "image word at 0x%04X lies outside pmem and dmem",
                    word.addr.value);
      throw LayoutViolation(buf);
    }
    state.mem[word.addr.value] = word.value;
  }
  state.pc = layout.init.min;
  return state;
}

void hard_reset(MachineState& state) {
  state.regs = {};
  state.gie = false;
  state.halted = false;
  state.pending = {};
  state.dma = {};
  state.link_stack.clear();
  reset_peripherals(state.peripherals);
  state.pc = Address(0);
  state.phase = Phase::kInReset;
}

namespace {

Address dma_ctl_address(const MemoryLayout& layout) {
  return register_address(layout, reg::kDmaCtl);
}

void write_location(MachineState& state, Address a, Word value) {
  if (a == dma_ctl_address(state.layout)) {
    state.dma.active = value != 0;
    return;
  }
  if (write_register(state.peripherals, state.layout, a, value)) {
    // Clearing the flag withdraws the request.
    if (a == register_address(state.layout, reg::kP1Ifg) && !(value & 1)) {
      state.pending.gpio = false;
    }
    return;
  }
  state.mem[a.value] = value;
}

// Side effects of a committed CPU read.
void after_read(MachineState& state, Address a) {
  if (a == register_address(state.layout, reg::kUartRxd)) {
    state.pending.uart = false;
  }
}

struct Effects {
  Address next_pc;
  std::optional<std::pair<int, Word>> reg_write;
  std::optional<std::pair<Address, Word>> cpu_write;
  std::optional<Address> cpu_read;
  std::optional<Address> push;
  bool pop = false;
  std::optional<bool> gie_next;
  std::optional<IrqSource> dispatched;
  bool halt = false;
  bool swreset = false;
  std::string fault;
};

std::string fault_text(const char* what, Address a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s at 0x%04X", what, a.value);
  return buf;
}

// Fills `fx` for the interrupt dispatch micro-step.
void prepare_dispatch(const MachineState& state, IrqSource source,
                      CycleSnapshot& snap, Effects& fx) {
  snap.irq = true;
  snap.irq_source = source;
  fx.dispatched = source;
  const Address handler(state.mem[irq_slot(state.layout, source).value]);
  if (state.link_stack.size() >= kLinkStackDepth) {
    fx.fault = fault_text("link stack overflow on dispatch", state.pc);
    return;
  }
  if (!state.layout.pmem.contains(handler)) {
    fx.fault = fault_text("irq handler outside pmem", handler);
    return;
  }
  fx.push = state.pc;
  fx.next_pc = handler;
}

void prepare_instruction(const MachineState& state, CycleSnapshot& snap,
                         Effects& fx) {
  const Address pc = state.pc;
  const auto& pmem = state.layout.pmem;
  if (!pmem.contains(pc) || !pmem.contains(pc + 1)) {
    fx.fault = fault_text("fetch outside pmem", pc);
    return;
  }
  const auto insn = try_decode(state.mem[pc.value], state.mem[pc.value + 1]);
  if (!insn) {
    fx.fault = fault_text("illegal instruction", pc);
    return;
  }
  const Address target(insn->operand);
  const Word r = state.regs[insn->reg];
  fx.next_pc = pc + 2;
  bool transfers = false;
  switch (insn->opcode) {
    case Opcode::kNop:
      break;
    case Opcode::kMovi:
      fx.reg_write = {insn->reg, insn->operand};
      break;
    case Opcode::kLoad:
      snap.r_en = true;
      snap.d_addr = target;
      fx.cpu_read = target;
      fx.reg_write = {insn->reg, peek(state, target)};
      break;
    case Opcode::kStore:
      snap.w_en = true;
      snap.d_addr = target;
      fx.cpu_write = {target, r};
      break;
    case Opcode::kAdd:
      fx.reg_write = {insn->reg, static_cast<Word>(r + insn->operand)};
      break;
    case Opcode::kSub:
      fx.reg_write = {insn->reg, static_cast<Word>(r - insn->operand)};
      break;
    case Opcode::kCmpbr:
      if (r != 0) {
        fx.next_pc = target;
        transfers = true;
      }
      break;
    case Opcode::kJmp:
      fx.next_pc = target;
      transfers = true;
      break;
    case Opcode::kCall:
      if (state.link_stack.size() >= kLinkStackDepth) {
        fx.fault = fault_text("link stack overflow", pc);
        return;
      }
      fx.push = pc + 2;
      fx.next_pc = target;
      transfers = true;
      break;
    case Opcode::kRet:
    case Opcode::kReti:
      if (state.link_stack.empty()) {
        fx.fault = fault_text("link stack underflow", pc);
        return;
      }
      fx.pop = true;
      fx.next_pc = state.link_stack.back();
      transfers = true;
      break;
    case Opcode::kEint:
      fx.gie_next = true;
      break;
    case Opcode::kDint:
      fx.gie_next = false;
      break;
    case Opcode::kSwreset:
      fx.swreset = true;
      break;
    case Opcode::kHalt:
      fx.halt = true;
      fx.next_pc = pc;
      break;
  }
  if (transfers && !pmem.contains(fx.next_pc)) {
    fx.fault = fault_text("control transfer outside pmem", fx.next_pc);
  } else if (!transfers && !fx.halt && !pmem.contains(fx.next_pc)) {
    fx.fault = fault_text("fall-through past pmem", pc);
  }
}

void inject_events(MachineState& state, const EventSchedule* events,
                   EventCursor& cursor, std::vector<IrqSource>& raised) {
  if (events == nullptr) return;
  const auto now = state.cycle;
  auto raise = [&](std::optional<IrqSource> s) {
    if (!s) return;
    state.pending.set(*s);
    raised.push_back(*s);
  };
  auto& gpio = events->gpio_events;
  while (cursor.gpio < gpio.size() && gpio[cursor.gpio].cycle <= now) {
    if (gpio[cursor.gpio].cycle == now) {
      raise(gpio_inject(state.peripherals, gpio[cursor.gpio].level));
    }
    ++cursor.gpio;
  }
  auto& uart = events->uart_events;
  while (cursor.uart < uart.size() && uart[cursor.uart].cycle <= now) {
    if (uart[cursor.uart].cycle == now) {
      raise(uart_inject(state.peripherals, uart[cursor.uart].byte));
    }
    ++cursor.uart;
  }
}

}  // namespace

Word peek(const MachineState& state, Address a) {
  if (a == dma_ctl_address(state.layout)) return state.dma.active ? 1 : 0;
  Word value = 0;
  if (read_register(state.peripherals, state.layout, a, value)) return value;
  return state.mem[a.value];
}

CycleOutcome execute_cycle(MachineState& state, const MonitorHook& monitor,
                           const EventSchedule* events, EventCursor& cursor) {
  CycleOutcome out;
  CycleSnapshot& snap = out.snap;
  snap.cycle = state.cycle;
  inject_events(state, events, cursor, out.raised);

  if (state.phase != Phase::kRunning) {
    // The reset cycle: pc=0, every bus quiet.
    snap.pc = Address(0);
    snap.gie = state.gie;
    if (monitor) monitor(snap);
    state.pc = state.layout.init.min;
    state.phase = Phase::kRunning;
    ++state.cycle;
    return out;
  }

  if (auto t = tick_timer(state.peripherals)) {
    state.pending.set(*t);
    out.raised.push_back(*t);
  }

  snap.pc = state.pc;
  snap.gie = state.gie;
  Effects fx;
  if (state.gie && state.pending.any()) {
    prepare_dispatch(state, state.pending.highest(), snap, fx);
  } else {
    prepare_instruction(state, snap, fx);
  }

  const DmaAccess dma = dma_tick(state.dma, state.cycle);
  snap.dma_en = dma.dma_en;
  snap.dma_addr = dma.dma_addr;

  const bool monitor_reset = monitor ? monitor(snap) : false;
  if (monitor_reset) {
    out.cause = ResetCause::kMonitor;
  } else if (!fx.fault.empty()) {
    out.cause = ResetCause::kFault;
    out.fault = fx.fault;
  } else if (fx.swreset) {
    out.cause = ResetCause::kSoftware;
  }
  snap.reset = out.cause != ResetCause::kNone;

  // Log attempted accesses with the contents before the cycle.
  if (fx.cpu_write) {
    out.accesses.push_back({state.cycle, AccessSource::kCpu, AccessKind::kWrite,
                            fx.cpu_write->first, fx.cpu_write->second, false,
                            peek(state, fx.cpu_write->first), 0});
  }
  if (fx.cpu_read) {
    const Word v = peek(state, *fx.cpu_read);
    out.accesses.push_back({state.cycle, AccessSource::kCpu, AccessKind::kRead,
                            *fx.cpu_read, v, false, v, 0});
  }
  if (dma.dma_en) {
    const Word before = peek(state, dma.dma_addr);
    out.accesses.push_back(
        {state.cycle, AccessSource::kDma,
         dma.write ? AccessKind::kWrite : AccessKind::kRead, dma.dma_addr,
         dma.write.value_or(before), false, before, 0});
  }

  if (snap.reset) {
    hard_reset(state);
  } else {
    if (fx.cpu_write) write_location(state, fx.cpu_write->first, fx.cpu_write->second);
    if (fx.cpu_read) after_read(state, *fx.cpu_read);
    if (dma.write) write_location(state, dma.dma_addr, *dma.write);
    if (fx.reg_write) state.regs[fx.reg_write->first] = fx.reg_write->second;
    if (fx.pop) state.link_stack.pop_back();
    if (fx.push) state.link_stack.push_back(*fx.push);
    if (fx.dispatched) state.pending.set(*fx.dispatched, false);
    if (fx.gie_next) state.gie = *fx.gie_next;
    if (fx.halt) state.halted = true;
    state.pc = fx.next_pc;
    for (auto& access : out.accesses) access.committed = true;
  }
  for (auto& access : out.accesses) access.after = peek(state, access.addr);
  ++state.cycle;
  return out;
}

CycleSnapshot step(MachineState& state) {
  if (state.halted) throw Error("step on a halted machine");
  EventCursor cursor;
  return execute_cycle(state, nullptr, nullptr, cursor).snap;
}

}  // namespace garota::sim
