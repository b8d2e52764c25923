#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garota/sim/machine.h"

namespace garota::scenarios {

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  std::string name;
  std::string program;  // assembly text
  std::optional<std::uint32_t> tcb_size;
  sim::IrqSource trigger = sim::IrqSource::kNone;
  sim::EventSchedule events;
  std::vector<sim::DmaEntry> dma;
  bool confidentiality = false;
  std::uint64_t max_cycles = 1000;
  std::vector<std::string> expect;  // one named check per entry

  sim::MemoryLayout layout() const;
  bool operator==(const Scenario&) const = default;
};

// Sectioned text: [meta] (name, trigger, max_cycles, confidentiality,
// tcb_size), [program], [events] (`gpio CYCLE LEVEL`, `uart CYCLE BYTE`),
// [dma] (`CYCLE ADDR [VALUE]`, CYCLE may be a `FIRST..LAST` range) and
// [expect]. Throws ScenarioError with the line number.
Scenario parse_scenario(std::string_view text);
std::string to_text(const Scenario& s);

inline constexpr std::string_view kBuiltinNames[] = {"gpio-tcb", "timer-tcb",
                                                      "net-tcb"};

// Throws UnknownScenario.
Scenario builtin_scenario(std::string_view name);

// Marker line in every built-in program where an attack splices its jump.
inline constexpr std::string_view kAttackHook = "JMP main_body ; attack-hook";

}  // namespace garota::scenarios
