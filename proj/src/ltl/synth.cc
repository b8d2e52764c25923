#include "garota/ltl/synth.h"

#include <algorithm>
#include <map>

namespace garota::ltl {

namespace {

// Checks the body shape; returns whether X occurs.
bool check_body(const Formula& f, bool under_next) {
  switch (f->op()) {
    case Op::kNext:
      if (under_next) throw FragmentError("nested X is outside the fragment");
      check_body(f->arg(0), true);
      return true;
    case Op::kGlobally:
    case Op::kFinally:
    case Op::kUntil:
    case Op::kWeakUntil:
      throw FragmentError("temporal operator inside G body: " + to_string(f));
    default: {
      bool any = false;
      for (const auto& a : f->args()) any = check_body(a, under_next) || any;
      return any;
    }
  }
}

bool eval_body(const Formula& f, const Alphabet& alphabet, Letter cur,
               Letter nxt, bool in_next) {
  const auto& a = f->args();
  switch (f->op()) {
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kAtom: {
      const auto i = alphabet.index(f->name());
      if (!i) throw UnknownAtom("atom '" + f->name() + "' has no valuation");
      return has(in_next ? nxt : cur, *i);
    }
    case Op::kNot: return !eval_body(a[0], alphabet, cur, nxt, in_next);
    case Op::kAnd:
      for (const auto& x : a) {
        if (!eval_body(x, alphabet, cur, nxt, in_next)) return false;
      }
      return true;
    case Op::kOr:
      for (const auto& x : a) {
        if (eval_body(x, alphabet, cur, nxt, in_next)) return true;
      }
      return false;
    case Op::kImplies:
      return !eval_body(a[0], alphabet, cur, nxt, in_next) ||
             eval_body(a[1], alphabet, cur, nxt, in_next);
    case Op::kNext: return eval_body(a[0], alphabet, cur, nxt, true);
    default: break;
  }
  throw FragmentError("temporal operator inside G body");
}

}  // namespace

GuardedSafety GuardedSafety::of(const Formula& f) {
  if (f->op() != Op::kGlobally) {
    throw FragmentError("expected G(body), got " + to_string(f));
  }
  GuardedSafety g;
  g.body = f->arg(0);
  g.lookahead = check_body(g.body, false);
  return g;
}

bool GuardedSafety::holds(const Alphabet& alphabet, Letter current,
                          Letter next) const {
  return eval_body(body, alphabet, current, next, false);
}

std::vector<Letter> consistent_letters(const Alphabet& alphabet,
                                       const std::vector<Formula>& axioms) {
  std::vector<std::string> names = alphabet.names();
  std::vector<GuardedSafety> bodies;
  for (const auto& ax : axioms) {
    auto g = GuardedSafety::of(ax);
    if (g.lookahead) throw FragmentError("axioms must be per-position");
    bodies.push_back(g);
    for (const auto& a : atoms(ax)) {
      if (std::find(names.begin(), names.end(), a) == names.end()) {
        names.push_back(a);
      }
    }
  }
  const std::size_t own = alphabet.size();
  const std::size_t extra = names.size() - own;
  if (own > 20 || extra > 20) throw Error("too many atoms to enumerate");
  const Alphabet ext(names);
  std::vector<Letter> out;
  for (Letter l = 0; l < (Letter{1} << own); ++l) {
    for (Letter x = 0; x < (Letter{1} << extra); ++x) {
      const Letter full = l | (x << own);
      bool ok = true;
      for (const auto& b : bodies) {
        if (!b.holds(ext, full, 0)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.push_back(l);
        break;
      }
    }
  }
  return out;
}

MonitorFsm synthesize_safety_monitor(const Formula& f) {
  const auto g = GuardedSafety::of(f);
  MonitorFsm m;
  m.alphabet = Alphabet::of(atoms(f));
  m.lookahead = g.lookahead;
  if (m.alphabet.size() > 16) throw Error("too many atoms to tabulate");
  const std::size_t letters = std::size_t{1} << m.alphabet.size();

  if (!g.lookahead) {
    m.next.assign(1, std::vector<std::uint32_t>(letters, 0));
    m.violation.assign(1, std::vector<char>(letters, 0));
    for (Letter l = 0; l < letters; ++l) {
      m.violation[0][l] = !g.holds(m.alphabet, l, 0);
    }
    return m;
  }

  // A letter's class is the constraint it puts on the following letter.
  using Constraint = std::vector<char>;
  std::map<Constraint, std::uint32_t> classes;
  classes.emplace(Constraint(letters, 1), 0);  // unconstrained == initial
  std::vector<Constraint> constraint_of_state = {Constraint(letters, 1)};
  std::vector<std::uint32_t> class_of_letter(letters);
  for (Letter p = 0; p < letters; ++p) {
    Constraint c(letters);
    for (Letter l = 0; l < letters; ++l) c[l] = g.holds(m.alphabet, p, l);
    auto [it, inserted] =
        classes.emplace(c, static_cast<std::uint32_t>(classes.size()));
    if (inserted) constraint_of_state.push_back(c);
    class_of_letter[p] = it->second;
  }
  const std::size_t states = constraint_of_state.size();
  m.next.assign(states, class_of_letter);
  m.violation.assign(states, std::vector<char>(letters, 0));
  for (std::size_t s = 0; s < states; ++s) {
    for (Letter l = 0; l < letters; ++l) {
      m.violation[s][l] = !constraint_of_state[s][l];
    }
  }
  return m;
}

}  // namespace garota::ltl
