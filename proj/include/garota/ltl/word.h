#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "garota/ltl/formula.h"

namespace garota::ltl {

class UnknownAtom : public Error {
 public:
  using Error::Error;
};

// Ordered atom names; atom i is bit i of a Letter.
class Alphabet {
 public:
  static constexpr std::size_t kMaxAtoms = 64;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  static Alphabet of(const std::set<std::string>& names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index(const std::string& name) const;
  bool contains(const std::string& name) const { return index(name).has_value(); }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

using Letter = std::uint64_t;

inline bool has(Letter l, std::size_t bit) { return (l >> bit) & 1; }
inline Letter with(Letter l, std::size_t bit, bool v) {
  return v ? (l | (Letter{1} << bit)) : (l & ~(Letter{1} << bit));
}

// "{A, !B, C}" style rendering.
std::string letter_to_string(const Alphabet& alphabet, Letter l);

// Denotes prefix . loop^omega.
struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> loop;  // non-empty

  std::size_t size() const { return prefix.size() + loop.size(); }
  bool operator==(const LassoWord&) const = default;
};

std::string lasso_to_string(const Alphabet& alphabet, const LassoWord& w);

enum class VerdictKind : std::uint8_t { kHolds, kViolated, kInconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  std::size_t position = 0;  // meaningful for kViolated

  static Verdict holds() { return {VerdictKind::kHolds, 0}; }
  static Verdict violated(std::size_t p) { return {VerdictKind::kViolated, p}; }
  static Verdict inconclusive() { return {VerdictKind::kInconclusive, 0}; }
  bool operator==(const Verdict&) const = default;
};

std::string to_string(const Verdict& v);

// Throws UnknownAtom when `f` mentions an atom outside `alphabet`.
void require_atoms(const Formula& f, const Alphabet& alphabet);

// Three-valued finite-prefix verdict by formula progression.
Verdict eval_on_trace(const Formula& f, const Alphabet& alphabet,
                      const std::vector<Letter>& trace);

// Exact satisfaction on an ultimately periodic word.
bool eval_on_lasso(const Formula& f, const Alphabet& alphabet,
                   const LassoWord& w);

// Reusable form of eval_on_lasso for many words over one formula.
class LassoEvaluator {
 public:
  LassoEvaluator(const Formula& f, const Alphabet& alphabet);
  bool operator()(const LassoWord& w) const;

  struct Cell {
    Op op;
    std::size_t bit = 0;
    std::vector<std::size_t> kids;
  };

 private:
  std::vector<Cell> cells_;  // children precede parents; root is last
};

}  // namespace garota::ltl
