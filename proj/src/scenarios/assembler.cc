#include "garota/scenarios/assembler.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <vector>

namespace garota::scenarios {

namespace {

using sim::Address;
using sim::MemoryLayout;
using sim::Region;
using sim::Word;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool valid_name(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_ident);
}

// Strips a `;` comment, leaving ';' inside character literals alone.
std::string_view strip_comment(std::string_view line) {
  bool in_char = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') in_char = !in_char;
    if (line[i] == ';' && !in_char) return line.substr(0, i);
  }
  return line;
}

struct Source {
  std::size_t line = 0;
  std::optional<std::string> label;
  std::string op;  // upper-cased directive or mnemonic; empty for label-only
  std::string at;  // ADDR of a hex-listing line `ADDR: WORD`
  std::string args;
};

class Evaluator {
 public:
  Evaluator(const SymbolTable& predefined, const SymbolTable& user)
      : predefined_(predefined), user_(user) {}

  // Returns nullopt when a symbol is not (yet) defined and `strict` is off.
  std::optional<long> eval(std::string_view text, std::size_t line,
                           bool strict) const {
    text = trim(text);
    if (text.empty()) throw AssemblyError("missing expression", line);
    long total = 0;
    int sign = 1;
    std::size_t i = 0;
    bool expect_term = true;
    bool unresolved = false;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (!expect_term) {
        if (c != '+' && c != '-') {
          throw AssemblyError("unexpected '" + std::string(1, c) + "' in expression", line);
        }
        sign = c == '+' ? 1 : -1;
        expect_term = true;
        ++i;
        continue;
      }
      long value = 0;
      if (c == '\'') {
        if (i + 2 >= text.size() || text[i + 2] != '\'') {
          throw AssemblyError("bad character literal", line);
        }
        value = static_cast<unsigned char>(text[i + 1]);
        i += 3;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() && is_ident(text[j])) ++j;
        const std::string num(text.substr(i, j - i));
        char* end = nullptr;
        const bool hex = num.size() > 2 && num[0] == '0' &&
                         (num[1] == 'x' || num[1] == 'X');
        value = std::strtol(num.c_str(), &end, hex ? 16 : 10);
        if (*end != '\0') throw AssemblyError("bad number '" + num + "'", line);
        i = j;
      } else if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < text.size() && is_ident(text[j])) ++j;
        const std::string_view name = text.substr(i, j - i);
        if (auto it = user_.find(name); it != user_.end()) {
          value = it->second;
        } else if (auto p = predefined_.find(name); p != predefined_.end()) {
          value = p->second;
        } else if (strict) {
          throw AssemblyError("undefined symbol '" + std::string(name) + "'", line);
        } else {
          unresolved = true;
        }
        i = j;
      } else {
        throw AssemblyError("unexpected '" + std::string(1, c) + "' in expression", line);
      }
      total += sign * value;
      expect_term = false;
    }
    if (expect_term) throw AssemblyError("dangling operator", line);
    if (unresolved) return std::nullopt;
    return total;
  }

 private:
  const SymbolTable& predefined_;
  const SymbolTable& user_;
};

Word to_word(long v, std::size_t line) {
  if (v < -0x8000 || v > 0xFFFF) {
    throw AssemblyError("value " + std::to_string(v) + " does not fit a word", line);
  }
  return static_cast<Word>(v & 0xFFFF);
}

std::vector<Source> split_lines(std::string_view text) {
  std::vector<Source> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    Source src;
    src.line = line_no;
    const auto colon = line.find(':');
    if (colon != std::string_view::npos && line.find('\'') > colon) {
      const auto label = trim(line.substr(0, colon));
      if (!label.empty() && std::isdigit(static_cast<unsigned char>(label[0]))) {
        src.at = std::string(label);
        src.op = ".WORD";
        src.args = std::string(trim(line.substr(colon + 1)));
        out.push_back(std::move(src));
        continue;
      }
      if (!valid_name(label)) {
        throw AssemblyError("bad label '" + std::string(label) + "'", line_no);
      }
      src.label = std::string(label);
      line = trim(line.substr(colon + 1));
    }
    std::size_t k = 0;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    src.op = std::string(line.substr(0, k));
    for (auto& c : src.op) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    src.args = std::string(trim(line.substr(k)));
    out.push_back(std::move(src));
  }
  return out;
}

// Innermost named region holding `a`, used for overflow checks.
std::optional<std::pair<std::string, Region>> region_of(const MemoryLayout& l,
                                                        Address a) {
  const std::pair<const char*, Region> ordered[] = {
      {"init", l.init}, {"tcb", l.tcb},   {"irq table", l.irq_table},
      {"pmem", l.pmem}, {"dmem", l.dmem},
  };
  for (const auto& [name, r] : ordered) {
    if (r.contains(a)) return std::pair{std::string(name), r};
  }
  return std::nullopt;
}

std::string hex4(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", v & 0xFFFF);
  return buf;
}

}  // namespace

SymbolTable predefined_symbols(const MemoryLayout& l) {
  using namespace sim;
  SymbolTable s = {
      {"INIT_MIN", l.init.min.value},
      {"INIT_MAX", l.init.max.value},
      {"TCB_MIN", l.tcb.min.value},
      {"TCB_MAX", l.tcb.max.value},
      // First word past RET's operand at TCB_MAX.
      {"APP_BASE", static_cast<Word>(l.tcb.max.value + 2)},
      {"PMEM_MIN", l.pmem.min.value},
      {"PMEM_MAX", l.pmem.max.value},
      {"DMEM_MIN", l.dmem.min.value},
      {"DMEM_MAX", l.dmem.max.value},
      {"IRQ_TABLE", l.irq_table.min.value},
      {"VEC_GPIO", irq_slot(l, IrqSource::kGpio).value},
      {"VEC_TIMER", irq_slot(l, IrqSource::kTimer).value},
      {"VEC_UART", irq_slot(l, IrqSource::kUart).value},
      {"MC_1", kMc1},
      {"TASSEL_2", kTassel2},
      {"CCIE", kCcie},
      {"UART_EN", kUartEn},
      {"UART_IEN_RX", kUartIenRx},
  };
  const std::pair<const char*, int> regs[] = {
      {"P1IN", reg::kP1In},         {"P1DIR", reg::kP1Dir},
      {"P1IFG", reg::kP1Ifg},       {"P1IES", reg::kP1Ies},
      {"P1IE", reg::kP1Ie},         {"P3DIR", reg::kP3Dir},
      {"P3OUT", reg::kP3Out},       {"TACTL", reg::kTactl},
      {"TAR", reg::kTar},           {"CCTL0", reg::kCctl0},
      {"CCR0", reg::kCcr0},         {"UART_BAUD", reg::kUartBaud},
      {"UART_CTL", reg::kUartCtl},  {"UART_RXD", reg::kUartRxd},
      {"DMA_CTL", reg::kDmaCtl},
  };
  for (const auto& [name, off] : regs) {
    s.emplace(name, register_address(l, off).value);
  }
  return s;
}

Assembly assemble(std::string_view text, const MemoryLayout& layout) {
  const SymbolTable predefined = predefined_symbols(layout);
  const auto lines = split_lines(text);
  Assembly out;
  Evaluator ev(predefined, out.symbols);

  auto define = [&](const std::string& name, Word value, std::size_t line) {
    if (predefined.count(name)) {
      throw AssemblyError("'" + name + "' redefines a predefined symbol", line);
    }
    if (!out.symbols.emplace(name, value).second) {
      throw AssemblyError("duplicate label '" + name + "'", line);
    }
  };

  // Pass 1: addresses of labels; .equ resolved in order.
  long lc = layout.init.min.value;
  for (const auto& src : lines) {
    if (src.label) define(*src.label, to_word(lc, src.line), src.line);
    if (src.op.empty()) continue;
    if (!src.at.empty()) lc = to_word(*ev.eval(src.at, src.line, true), src.line);
    if (src.op == ".ORG") {
      const auto v = ev.eval(src.args, src.line, true);
      lc = to_word(*v, src.line);
    } else if (src.op == ".EQU") {
      std::size_t k = 0;
      while (k < src.args.size() && !std::isspace(static_cast<unsigned char>(src.args[k]))) ++k;
      const std::string name = src.args.substr(0, k);
      if (!valid_name(name)) throw AssemblyError("bad .equ name", src.line);
      const auto v = ev.eval(std::string_view(src.args).substr(k), src.line, true);
      define(name, to_word(*v, src.line), src.line);
    } else if (src.op == ".WORD") {
      lc += 1;
    } else if (sim::parse_mnemonic(src.op)) {
      lc += 2;
    } else {
      throw AssemblyError("unknown mnemonic '" + src.op + "'", src.line);
    }
  }

  // Pass 2: emit.
  std::map<Word, std::size_t> placed;  // address -> line
  std::optional<Region> block;
  std::string block_name;
  lc = layout.init.min.value;
  auto open_block = [&](long start, std::size_t line) {
    const auto r = region_of(layout, Address(to_word(start, line)));
    if (!r) {
      throw AssemblyError("address " + hex4(static_cast<unsigned>(start)) +
                              " lies outside pmem and dmem", line);
    }
    block_name = r->first;
    block = r->second;
  };
  // An instruction's operand word may spill one past the region end, so
  // RET can sit on the last word of the TCB.
  auto emit = [&](Word value, std::size_t line, bool operand) {
    if (!block) open_block(lc, line);
    if (lc > 0xFFFF) throw AssemblyError("address past 0xFFFF", line);
    if (!operand && !block->contains(Address(static_cast<Word>(lc)))) {
      throw AssemblyError("region overflow: " + block_name + " ends at " +
                              hex4(block->max.value), line);
    }
    const Word a = static_cast<Word>(lc);
    if (auto [it, fresh] = placed.emplace(a, line); !fresh) {
      throw AssemblyError("address " + hex4(a) + " already written at line " +
                              std::to_string(it->second), line);
    }
    out.image.push_back({Address(a), value});
    ++lc;
  };

  for (const auto& src : lines) {
    if (src.op.empty() || src.op == ".EQU") continue;
    if (src.op == ".ORG") {
      lc = *ev.eval(src.args, src.line, true);
      open_block(lc, src.line);
      continue;
    }
    if (!src.at.empty()) {
      lc = *ev.eval(src.at, src.line, true);
      open_block(lc, src.line);
    }
    if (src.op == ".WORD") {
      emit(to_word(*ev.eval(src.args, src.line, true), src.line), src.line, false);
      continue;
    }
    const auto op = *sim::parse_mnemonic(src.op);
    sim::Instruction insn{op, 0, 0};
    std::string_view rest = src.args;
    if (sim::uses_register(op)) {
      const auto comma = rest.find(',');
      const auto r = trim(rest.substr(0, comma));
      if (r.size() != 2 || (r[0] != 'r' && r[0] != 'R') || r[1] < '0' ||
          r[1] >= '0' + sim::kNumRegisters) {
        throw AssemblyError(src.op + " needs a register r0..r3", src.line);
      }
      insn.reg = static_cast<std::uint8_t>(r[1] - '0');
      if (comma == std::string_view::npos) {
        throw AssemblyError(src.op + " needs an operand", src.line);
      }
      rest = rest.substr(comma + 1);
    }
    if (sim::uses_operand(op)) {
      insn.operand = to_word(*ev.eval(rest, src.line, true), src.line);
    } else if (!trim(rest).empty()) {
      throw AssemblyError(src.op + " takes no operand", src.line);
    }
    const auto enc = sim::encode(insn);
    emit(enc.opcode_word, src.line, false);
    emit(enc.operand_word, src.line, true);
  }

  std::sort(out.image.begin(), out.image.end(),
            [](const auto& a, const auto& b) { return a.addr < b.addr; });
  return out;
}

sim::Word eval_expression(std::string_view text, const MemoryLayout& layout,
                          const SymbolTable& extra) {
  const SymbolTable predefined = predefined_symbols(layout);
  const Evaluator ev(predefined, extra);
  return to_word(*ev.eval(text, 0, true), 0);
}

std::string disassemble(const sim::Image& image, const MemoryLayout& layout) {
  sim::Image sorted = image;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.addr < b.addr; });
  std::string out;
  std::optional<unsigned> expected;
  std::string current_region;
  for (std::size_t i = 0; i < sorted.size();) {
    const unsigned a = sorted[i].addr.value;
    const auto region = region_of(layout, sorted[i].addr);
    if (!expected || *expected != a ||
        (region && region->first != current_region)) {
      out += ".org " + hex4(a) + "\n";
      current_region = region ? region->first : "";
    }
    std::optional<sim::Instruction> insn;
    if (i + 1 < sorted.size() && sorted[i + 1].addr.value == a + 1) {
      insn = sim::try_decode(sorted[i].value, sorted[i + 1].value);
    }
    if (insn) {
      out += "    " + std::string(sim::mnemonic(insn->opcode));
      if (sim::uses_register(insn->opcode)) {
        out += " r" + std::to_string(insn->reg) + ",";
      }
      if (sim::uses_operand(insn->opcode)) out += " " + hex4(insn->operand);
      out += "\n";
      expected = a + 2;
      i += 2;
    } else {
      out += "    .word " + hex4(sorted[i].value) + "\n";
      expected = a + 1;
      i += 1;
    }
  }
  return out;
}

std::string format_hex_image(const sim::Image& image) {
  std::string out;
  for (const auto& w : image) out += hex4(w.addr.value) + ": " + hex4(w.value) + "\n";
  return out;
}

}  // namespace garota::scenarios
