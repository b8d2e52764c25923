#pragma once

#include <initializer_list>

#include "garota/sim/isa.h"
#include "garota/sim/machine.h"

namespace garota::testing {

// Places `code` as consecutive two-word instructions starting at `base`.
inline void emit(sim::Image& image, sim::Address base,
                 std::initializer_list<sim::Instruction> code) {
  auto at = base;
  for (const auto& insn : code) {
    const auto enc = sim::encode(insn);
    image.push_back({at, enc.opcode_word});
    image.push_back({at + 1, enc.operand_word});
    at = at + 2;
  }
}

inline sim::Instruction I(sim::Opcode op, int reg = 0, sim::Word operand = 0) {
  return {op, static_cast<std::uint8_t>(reg), operand};
}

}  // namespace garota::testing
