#pragma once

#include <vector>

#include "garota/ltl/word.h"
#include "garota/sim/types.h"

namespace garota::ltl {

// The 17 standard atoms, in a fixed order.
const Alphabet& signal_alphabet();

// Atom valuation of one cycle. TRIGGER is a dispatch from `trigger`.
Letter signal_letter(const sim::CycleSnapshot& s,
                     const sim::MemoryLayout& layout, sim::IrqSource trigger);

std::vector<Letter> signal_trace(const std::vector<sim::CycleSnapshot>& rows,
                                 const sim::MemoryLayout& layout,
                                 sim::IrqSource trigger);

}  // namespace garota::ltl
