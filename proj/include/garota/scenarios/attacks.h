#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "garota/monitor/guards.h"
#include "garota/scenarios/scenario.h"

namespace garota::scenarios {

class UnknownAttack : public Error {
 public:
  using Error::Error;
};

enum class AttackMechanism : std::uint8_t { kCode, kDma, kCodeAndDma };

struct AttackSpec {
  std::string name;
  monitor::GuardKind expected_guard;
  AttackMechanism mechanism = AttackMechanism::kCode;
  bool confidentiality_only = false;
  std::string summary;
};

const std::vector<AttackSpec>& attack_catalog();

// Throws UnknownAttack.
const AttackSpec& find_attack(std::string_view name);

bool applicable(const AttackSpec& a, const Scenario& base);

// Untrusted code for the attack runs once: `main` jumps to a segment that
// sets a flag word in DMEM (it survives resets) and then misbehaves, so after
// recovery the application runs normally. The returned scenario carries the
// attack expectations. Throws ScenarioError when the base program has no
// attack hook or the attack does not apply.
Scenario apply_attack(const Scenario& base, const AttackSpec& a);

}  // namespace garota::scenarios
