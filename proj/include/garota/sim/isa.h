#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "garota/sim/types.h"

namespace garota::sim {

// Minimal two-word ISA: an opcode word (opcode << 8 | register) followed by
// an operand word holding an immediate or an address.
enum class Opcode : std::uint8_t {
  kNop = 0x01,
  kMovi = 0x02,
  kLoad = 0x03,
  kStore = 0x04,
  kAdd = 0x05,
  kSub = 0x06,
  kCmpbr = 0x07,  // branch to operand when register != 0
  kJmp = 0x08,
  kCall = 0x09,
  kRet = 0x0A,
  kReti = 0x0B,
  kEint = 0x0C,
  kDint = 0x0D,
  kSwreset = 0x0E,
  kHalt = 0x0F,
};

inline constexpr std::array<Opcode, 15> kAllOpcodes = {
    Opcode::kNop,   Opcode::kMovi,  Opcode::kLoad, Opcode::kStore,
    Opcode::kAdd,   Opcode::kSub,   Opcode::kCmpbr, Opcode::kJmp,
    Opcode::kCall,  Opcode::kRet,   Opcode::kReti, Opcode::kEint,
    Opcode::kDint,  Opcode::kSwreset, Opcode::kHalt,
};

inline constexpr int kNumRegisters = 4;

struct Instruction {
  Opcode opcode = Opcode::kNop;
  std::uint8_t reg = 0;
  Word operand = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

class IllegalInstruction : public Error {
 public:
  using Error::Error;
};

bool uses_register(Opcode op);
bool uses_operand(Opcode op);
std::string_view mnemonic(Opcode op);
std::optional<Opcode> parse_mnemonic(std::string_view text);

struct EncodedInstruction {
  Word opcode_word;
  Word operand_word;
};

EncodedInstruction encode(const Instruction& insn);

// Throws IllegalInstruction for opcode words outside the encoding table.
Instruction decode(Word opcode_word, Word operand_word);

// Non-throwing variant used by the disassembler.
std::optional<Instruction> try_decode(Word opcode_word, Word operand_word);

}  // namespace garota::sim
