#include "garota/scenarios/scenario.h"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace garota::scenarios {

namespace {

using sim::IrqSource;

constexpr const char* kGpioProgram = R"(; gpio-tcb: a rising edge on P1.0 runs the TCB, which pulses P3OUT.
.equ LOOPS 200

.org INIT_MIN
    MOVI r3, 0
    CALL TCB_MIN
    JMP main

.org TCB_MIN
    DINT
    CMPBR r3, pulse
    MOVI r0, 0              ; first call: configure the trigger
    STORE r0, P1DIR
    STORE r0, P1IES
    STORE r0, P1IFG
    MOVI r0, 1
    STORE r0, P1IE
    JMP exit
pulse:
    MOVI r0, 0
    STORE r0, P1IFG
    MOVI r0, 1
    STORE r0, P3DIR
    STORE r0, P3OUT
    MOVI r0, LOOPS
spin:
    SUB r0, 1
    CMPBR r0, spin
    STORE r0, P3OUT         ; r0 is 0 here
    JMP exit

.org TCB_MAX-2
exit:
    EINT
    RET

.org APP_BASE
isr:
    MOVI r3, 1
    CALL TCB_MIN
    RETI
main:
    JMP main_body ; attack-hook
main_body:
    JMP main_body

.org VEC_GPIO
    .word isr
)";

constexpr const char* kTimerProgram = R"(; timer-tcb: every CCR0 expiry runs the TCB, which counts ticks.
.equ PERIOD 100
.equ TICKS 0x0300

.org INIT_MIN
    MOVI r3, 0
    CALL TCB_MIN
    JMP main

.org TCB_MIN
    DINT
    CMPBR r3, tick
    MOVI r0, CCIE           ; first call: start the timer
    STORE r0, CCTL0
    MOVI r0, PERIOD
    STORE r0, CCR0
    MOVI r0, TASSEL_2+MC_1
    STORE r0, TACTL
    JMP exit
tick:
    LOAD r0, TICKS
    ADD r0, 1
    STORE r0, TICKS
    JMP exit

.org TCB_MAX-2
exit:
    EINT
    RET

.org APP_BASE
isr:
    MOVI r3, 1
    CALL TCB_MIN
    RETI
main:
    JMP main_body ; attack-hook
main_body:
    JMP main_body

.org VEC_TIMER
    .word isr
)";

constexpr const char* kNetProgram = R"(; net-tcb: every received byte runs the TCB; 'r' resets the device.
.equ DATA 0x0300
.equ APPDATA 0x0301

.org INIT_MIN
    MOVI r3, 0
    CALL TCB_MIN
    JMP main

.org TCB_MIN
    DINT
    CMPBR r3, rx
    MOVI r0, 0x0068         ; first call: configure the receiver
    STORE r0, UART_BAUD
    MOVI r0, UART_EN+UART_IEN_RX
    STORE r0, UART_CTL
    JMP exit
rx:
    LOAD r0, UART_RXD
    STORE r0, DATA
    SUB r0, 'r'
    CMPBR r0, exit
    SWRESET

.org TCB_MAX-2
exit:
    EINT
    RET

.org APP_BASE
isr:
    MOVI r3, 1
    CALL TCB_MIN
    RETI
main:
    JMP main_body ; attack-hook
main_body:
    LOAD r1, DATA           ; hand the last byte to the application
    STORE r1, APPDATA
    JMP main_body

.org VEC_UART
    .word isr
)";

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::uint64_t parse_uint(const std::string& text, std::size_t line) {
  if (text.size() == 3 && text.front() == '\'' && text.back() == '\'') {
    return static_cast<unsigned char>(text[1]);
  }
  char* end = nullptr;
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  if (text.empty() || text[0] == '-') {
    throw ScenarioError("line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  const auto v = std::strtoull(text.c_str(), &end, hex ? 16 : 10);
  if (*end != '\0') {
    throw ScenarioError("line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

std::string hex4(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", v & 0xFFFF);
  return buf;
}

// Program text ends with exactly one newline.
std::string normalize_program(std::string text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.pop_back();
  }
  return text + "\n";
}

std::vector<sim::DmaEntry> dense(std::uint64_t first, std::uint64_t last,
                                 sim::Address addr,
                                 std::optional<sim::Word> value) {
  std::vector<sim::DmaEntry> out;
  for (auto c = first; c <= last; ++c) out.push_back({c, addr, value});
  return out;
}

}  // namespace

sim::MemoryLayout Scenario::layout() const {
  return tcb_size ? sim::MemoryLayout::with_tcb_size(*tcb_size)
                  : sim::MemoryLayout::standard();
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::string section;
  std::string program;
  bool seen_meta = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ScenarioError {
    return ScenarioError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string raw(text.substr(pos, nl == text.npos ? text.npos : nl - pos));
    pos = nl == text.npos ? text.size() : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.size() >= 2 && line.front() == '[' && line.back() == ']') {
      const std::string name = line.substr(1, line.size() - 2);
      if (name != "meta" && name != "program" && name != "events" &&
          name != "dma" && name != "expect") {
        throw fail("unknown section [" + name + "]");
      }
      section = name;
      seen_meta = seen_meta || name == "meta";
      continue;
    }
    if (section == "program") {
      program += raw + "\n";
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (section.empty()) throw fail("text before the first section");
    if (section == "meta") {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw fail("expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "name") {
        s.name = value;
      } else if (key == "trigger") {
        const auto src = sim::parse_irq_source(value);
        if (!src) throw fail("unknown trigger '" + value + "'");
        s.trigger = *src;
      } else if (key == "max_cycles") {
        s.max_cycles = parse_uint(value, line_no);
      } else if (key == "confidentiality") {
        if (value != "true" && value != "false") throw fail("expected true or false");
        s.confidentiality = value == "true";
      } else if (key == "tcb_size") {
        s.tcb_size = static_cast<std::uint32_t>(parse_uint(value, line_no));
      } else {
        throw fail("unknown key '" + key + "'");
      }
    } else if (section == "events") {
      const auto w = words(line);
      if (w.size() != 3) throw fail("expected `gpio CYCLE LEVEL` or `uart CYCLE BYTE`");
      const auto cycle = parse_uint(w[1], line_no);
      const auto v = parse_uint(w[2], line_no);
      if (w[0] == "gpio") {
        if (v > 1) throw fail("gpio level must be 0 or 1");
        s.events.gpio_events.push_back({cycle, v == 1});
      } else if (w[0] == "uart") {
        if (v > 0xFF) throw fail("uart byte out of range");
        s.events.uart_events.push_back({cycle, static_cast<std::uint8_t>(v)});
      } else {
        throw fail("unknown event kind '" + w[0] + "'");
      }
    } else if (section == "dma") {
      const auto w = words(line);
      if (w.size() < 2 || w.size() > 3) throw fail("expected `CYCLE ADDR [VALUE]`");
      std::uint64_t first = 0, last = 0;
      if (const auto dots = w[0].find(".."); dots != std::string::npos) {
        first = parse_uint(w[0].substr(0, dots), line_no);
        last = parse_uint(w[0].substr(dots + 2), line_no);
        if (last < first) throw fail("empty cycle range");
      } else {
        first = last = parse_uint(w[0], line_no);
      }
      const auto addr = parse_uint(w[1], line_no);
      if (addr > 0xFFFF) throw fail("address out of range");
      std::optional<sim::Word> value;
      if (w.size() == 3) {
        const auto v = parse_uint(w[2], line_no);
        if (v > 0xFFFF) throw fail("value out of range");
        value = static_cast<sim::Word>(v);
      }
      if (!s.dma.empty() && s.dma.back().cycle >= first) {
        throw fail("dma cycles must increase");
      }
      for (const auto& e : dense(first, last, sim::Address(static_cast<sim::Word>(addr)), value)) {
        s.dma.push_back(e);
      }
    } else if (section == "expect") {
      s.expect.push_back(line);
    }
  }
  if (!seen_meta) throw ScenarioError("missing [meta] section");
  if (s.name.empty()) throw ScenarioError("missing name in [meta]");
  if (trim(program).empty()) throw ScenarioError("missing [program] section");
  if (s.max_cycles == 0) throw ScenarioError("max_cycles must be positive");
  s.program = normalize_program(program);
  s.events.validate();
  return s;
}

std::string to_text(const Scenario& s) {
  std::string out = "[meta]\n";
  out += "name = " + s.name + "\n";
  out += "trigger = " + std::string(sim::to_string(s.trigger)) + "\n";
  out += "max_cycles = " + std::to_string(s.max_cycles) + "\n";
  out += std::string("confidentiality = ") + (s.confidentiality ? "true" : "false") + "\n";
  if (s.tcb_size) out += "tcb_size = " + std::to_string(*s.tcb_size) + "\n";
  out += "\n[program]\n" + normalize_program(s.program);
  out += "\n[events]\n";
  for (const auto& e : s.events.gpio_events) {
    out += "gpio " + std::to_string(e.cycle) + " " + (e.level ? "1" : "0") + "\n";
  }
  for (const auto& e : s.events.uart_events) {
    out += "uart " + std::to_string(e.cycle) + " " + hex4(e.byte) + "\n";
  }
  out += "\n[dma]\n";
  for (std::size_t i = 0; i < s.dma.size();) {
    std::size_t j = i;
    while (j + 1 < s.dma.size() && s.dma[j + 1].cycle == s.dma[j].cycle + 1 &&
           s.dma[j + 1].addr == s.dma[i].addr &&
           s.dma[j + 1].value == s.dma[i].value) {
      ++j;
    }
    out += std::to_string(s.dma[i].cycle);
    if (j > i) out += ".." + std::to_string(s.dma[j].cycle);
    out += " " + hex4(s.dma[i].addr.value);
    if (s.dma[i].value) out += " " + hex4(*s.dma[i].value);
    out += "\n";
    i = j + 1;
  }
  out += "\n[expect]\n";
  for (const auto& e : s.expect) out += e + "\n";
  return out;
}

Scenario builtin_scenario(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  const std::vector<std::string> common = {
      "no-guard-fired", "trigger-serviced", "retrigger", "tcb-completes",
      "ltl-clean"};
  if (name == "gpio-tcb") {
    s.program = kGpioProgram;
    s.trigger = IrqSource::kGpio;
    s.events.gpio_events = {{1000, true}, {1100, false}, {2000, true}, {2100, false}};
    s.max_cycles = 3000;
    s.expect = common;
    s.expect.insert(s.expect.end(), {"no-resets", "store-seen P3OUT 1",
                                     "store-seen P3OUT 0", "requests 2"});
  } else if (name == "timer-tcb") {
    s.program = kTimerProgram;
    s.trigger = IrqSource::kTimer;
    s.max_cycles = 2000;
    s.expect = common;
    s.expect.insert(s.expect.end(), {"no-resets", "mem-at-least TICKS 15"});
  } else if (name == "net-tcb") {
    s.program = kNetProgram;
    s.trigger = IrqSource::kUart;
    s.confidentiality = true;
    s.events.uart_events = {{1000, 'x'}, {2000, 'r'}};
    s.max_cycles = 3000;
    s.expect = common;
    s.expect.insert(s.expect.end(), {"sw-reset", "store-seen APPDATA 'x'",
                                     "requests 2"});
  } else {
    throw UnknownScenario("unknown scenario '" + std::string(name) + "'");
  }
  s.program = normalize_program(s.program);
  return s;
}

}  // namespace garota::scenarios
