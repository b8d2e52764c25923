#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "garota/error.h"

namespace garota::ltl {

enum class Op : std::uint8_t {
  kTrue,
  kFalse,
  kAtom,
  kNot,
  kAnd,  // n-ary, n >= 2
  kOr,   // n-ary, n >= 2
  kImplies,
  kNext,
  kGlobally,
  kFinally,
  kUntil,
  kWeakUntil,
};

class Node;
using Formula = std::shared_ptr<const Node>;

// Immutable AST node. Structural hash is computed once at construction.
class Node {
 public:
  Node(Op op, std::string name, std::vector<Formula> args);

  Op op() const { return op_; }
  const std::string& name() const { return name_; }
  const std::vector<Formula>& args() const { return args_; }
  const Formula& arg(std::size_t i) const { return args_[i]; }
  std::size_t hash() const { return hash_; }

 private:
  Op op_;
  std::string name_;
  std::vector<Formula> args_;
  std::size_t hash_;
};

// Plain constructors: no simplification, the tree is built as written.
Formula lit(bool value);
Formula atom(std::string name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula conj(std::vector<Formula> args);
Formula disj(Formula a, Formula b);
Formula disj(std::vector<Formula> args);
Formula implies(Formula a, Formula b);
Formula next(Formula f);
Formula globally(Formula f);
Formula eventually(Formula f);
Formula until(Formula a, Formula b);
Formula weak_until(Formula a, Formula b);

bool equal(const Formula& a, const Formula& b);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f->hash(); }
};
struct FormulaEq {
  bool operator()(const Formula& a, const Formula& b) const {
    return equal(a, b);
  }
};

// Total order consistent with equal(); used to canonicalize n-ary operands.
bool less(const Formula& a, const Formula& b);

// Minimal-parenthesis rendering; parse_formula(to_string(f)) equals f.
std::string to_string(const Formula& f);

std::set<std::string> atoms(const Formula& f);
bool is_propositional(const Formula& f);
bool is_temporal_op(Op op);

// Rewrites every a W b into (a U b) | G a.
Formula expand_weak_until(const Formula& f);

// Negation normal form: negations only on atoms, no implications.
Formula nnf(const Formula& f);

// Replaces atoms by constants; atoms missing from `values` stay.
Formula substitute(const Formula& f,
                   const std::vector<std::pair<std::string, Formula>>& values);

}  // namespace garota::ltl
