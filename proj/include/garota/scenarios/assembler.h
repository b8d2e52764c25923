#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "garota/sim/machine.h"

namespace garota::scenarios {

class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using SymbolTable = std::map<std::string, sim::Word, std::less<>>;

struct Assembly {
  sim::Image image;     // sorted by address
  SymbolTable symbols;  // labels and .equ names, without the predefined ones
};

// Names every program may use: region bounds (INIT_MIN, TCB_MIN, TCB_MAX,
// APP_BASE, ...), vector slots (VEC_GPIO, VEC_TIMER, VEC_UART), peripheral
// registers (P1IE, CCTL0, UART_RXD, DMA_CTL, ...) and control bits.
SymbolTable predefined_symbols(const sim::MemoryLayout& layout);

// Two-pass assembler. Source lines:
//   label:            binds the current address
//   .org EXPR         moves the location counter
//   .equ NAME EXPR    defines a constant
//   .word EXPR        emits one data word
//   ADDR: EXPR        places one word at ADDR (.org ADDR then .word EXPR),
//                     so a flat hex listing is a valid program
//   MNEMONIC [rN,] [EXPR]
// EXPR is a sum/difference of numbers (decimal, 0x hex, 'c') and symbols.
// `;` starts a comment. A block opened by .org may not run past the end of
// the innermost region holding its start (init, tcb, irq table, pmem, dmem);
// only the operand word of a block's last instruction may lie beyond it.
Assembly assemble(std::string_view text, const sim::MemoryLayout& layout);

// Evaluates an operand expression against the predefined symbols of
// `layout` and `extra`. Throws AssemblyError (line 0) when malformed.
sim::Word eval_expression(std::string_view text, const sim::MemoryLayout& layout,
                          const SymbolTable& extra = {});

// Flat `0xADDR: 0xWORD` listing, one line per word.
std::string format_hex_image(const sim::Image& image);

// Listing that assembles back to the same image under `layout`.
std::string disassemble(const sim::Image& image, const sim::MemoryLayout& layout);

}  // namespace garota::scenarios
