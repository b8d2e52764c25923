#include "garota/sim/isa.h"

#include <sstream>

namespace garota::sim {

namespace {

struct OpInfo {
  Opcode op;
  std::string_view name;
  bool reg;
  bool operand;
};

constexpr std::array<OpInfo, 15> kOpTable = {{
    {Opcode::kNop, "NOP", false, false},
    {Opcode::kMovi, "MOVI", true, true},
    {Opcode::kLoad, "LOAD", true, true},
    {Opcode::kStore, "STORE", true, true},
    {Opcode::kAdd, "ADD", true, true},
    {Opcode::kSub, "SUB", true, true},
    {Opcode::kCmpbr, "CMPBR", true, true},
    {Opcode::kJmp, "JMP", false, true},
    {Opcode::kCall, "CALL", false, true},
    {Opcode::kRet, "RET", false, false},
    {Opcode::kReti, "RETI", false, false},
    {Opcode::kEint, "EINT", false, false},
    {Opcode::kDint, "DINT", false, false},
    {Opcode::kSwreset, "SWRESET", false, false},
    {Opcode::kHalt, "HALT", false, false},
}};

const OpInfo& info(Opcode op) {
  return kOpTable[static_cast<std::size_t>(op) - 1];
}

}  // namespace

bool uses_register(Opcode op) { return info(op).reg; }
bool uses_operand(Opcode op) { return info(op).operand; }
std::string_view mnemonic(Opcode op) { return info(op).name; }

std::optional<Opcode> parse_mnemonic(std::string_view text) {
  for (const auto& entry : kOpTable) {
    if (entry.name.size() != text.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c != entry.name[i]) {
        same = false;
        break;
      }
    }
    if (same) return entry.op;
  }
  return std::nullopt;
}

EncodedInstruction encode(const Instruction& insn) {
  const auto reg = uses_register(insn.opcode) ? insn.reg : 0;
  return {static_cast<Word>((static_cast<unsigned>(insn.opcode) << 8) | reg),
          insn.operand};
}

std::optional<Instruction> try_decode(Word opcode_word, Word operand_word) {
  const unsigned code = opcode_word >> 8;
  const unsigned reg = opcode_word & 0xFF;
  if (code < 0x01 || code > 0x0F) return std::nullopt;
  const auto op = static_cast<Opcode>(code);
  if (uses_register(op) ? reg >= kNumRegisters : reg != 0) return std::nullopt;
  return Instruction{op, static_cast<std::uint8_t>(reg), operand_word};
}

Instruction decode(Word opcode_word, Word operand_word) {
  if (auto insn = try_decode(opcode_word, operand_word)) return *insn;
  std::ostringstream msg;
  msg << "illegal opcode word 0x" << std::hex << opcode_word;
  throw IllegalInstruction(msg.str());
}

}  // namespace garota::sim
