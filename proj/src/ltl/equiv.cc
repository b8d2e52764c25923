#include "garota/ltl/equiv.h"

#include <deque>
#include <set>
#include <tuple>

namespace garota::ltl {

std::string to_string(const EquivWitness& w) {
  std::string out = "state " + w.state + "\n  previous: ";
  out += w.previous ? letter_to_string(w.alphabet, *w.previous) : "(none)";
  out += w.previous_reset ? " RESET" : "";
  out += "\n  current:  " + letter_to_string(w.alphabet, w.current);
  out += "\n  machine output " + std::to_string(w.machine_output) +
         ", expected " + std::to_string(w.expected);
  return out;
}

SignalFsm as_signal_fsm(const MonitorFsm& m) {
  SignalFsm s;
  s.name = "synthesized";
  s.atoms = m.alphabet.names();
  s.initial = m.initial;
  s.step = [m](std::size_t state, const Alphabet& alphabet, Letter l) {
    Letter own = 0;
    for (std::size_t i = 0; i < m.alphabet.size(); ++i) {
      own = with(own, i, has(l, *alphabet.index(m.alphabet.name(i))));
    }
    return m.step(state, own);
  };
  s.state_name = [](std::size_t q) { return "q" + std::to_string(q); };
  return s;
}

EquivResult fsm_equiv_check(const SignalFsm& m, const Formula& f,
                            const EquivOptions& options) {
  std::vector<GuardedSafety> specs = {GuardedSafety::of(f)};
  for (const auto& c : options.contract) specs.push_back(GuardedSafety::of(c));

  std::set<std::string> names(m.atoms.begin(), m.atoms.end());
  for (const auto& a : atoms(f)) names.insert(a);
  for (const auto& c : options.contract) {
    for (const auto& a : atoms(c)) names.insert(a);
  }
  if (options.closed_loop) {
    names.insert(kPcZeroAtom);
    names.erase(kResetAtom);
  }
  const Alphabet alphabet = Alphabet::of(names);
  if (alphabet.size() > 20) throw Error("alphabet too large to enumerate");

  // Specs are evaluated over alphabet + RESET in the closed loop.
  std::vector<std::string> ext_names = alphabet.names();
  if (options.closed_loop) ext_names.push_back(kResetAtom);
  const Alphabet ext(ext_names);
  const std::size_t reset_bit = alphabet.size();

  const std::vector<Letter> letters = consistent_letters(alphabet, options.axioms);

  EquivResult result;
  result.letters = letters.size();
  const bool closed = options.closed_loop;
  const std::size_t zero_bit = closed ? *alphabet.index(kPcZeroAtom) : 0;

  // Violation condition of the union, for `cur` following `prev`.
  auto expected = [&](std::optional<Letter> prev, bool prev_reset,
                      Letter cur) {
    for (const auto& s : specs) {
      if (s.lookahead) {
        if (!prev) continue;
        Letter a = *prev, b = cur;
        if (options.closed_loop) a = with(a, reset_bit, prev_reset);
        if (!s.holds(ext, a, b)) return true;
      } else if (!s.holds(ext, cur, 0)) {
        return true;
      }
    }
    return false;
  };

  using Key = std::tuple<std::size_t, std::optional<Letter>, bool>;
  std::set<Key> seen;
  std::deque<Key> queue;
  const Key start{m.initial, std::nullopt, false};
  seen.insert(start);
  queue.push_back(start);

  while (!queue.empty()) {
    const auto [q, prev, prev_reset] = queue.front();
    queue.pop_front();
    for (Letter b : letters) {
      if (closed) {
        // The run opens with the reset cycle; every reset is followed by one.
        const bool must_zero = !prev || prev_reset;
        if (has(b, zero_bit) != must_zero) continue;
      }
      const auto [q2, out] = m.step(q, alphabet, b);
      const bool want = expected(prev, prev_reset, b);
      ++result.pairs;
      if (out != want) {
        result.witness = EquivWitness{alphabet, prev,
                                      prev_reset, b,
                                      m.state_name ? m.state_name(q) : "",
                                      out,        want};
        result.states = seen.size();
        return result;
      }
      std::vector<bool> resets = {out};
      // Another reset source may fire, except in the pc=0 cycle itself.
      if (closed && !out && !has(b, zero_bit)) resets.push_back(true);
      for (bool r : resets) {
        const Key key{q2, b, closed && r};
        if (seen.insert(key).second) queue.push_back(key);
      }
    }
  }
  result.states = seen.size();
  result.pass = true;
  return result;
}

EquivResult fsm_equiv_check(const MonitorFsm& m, const Formula& f,
                            const std::vector<Formula>& axioms) {
  EquivOptions options;
  options.axioms = axioms;
  options.closed_loop = false;
  return fsm_equiv_check(as_signal_fsm(m), f, options);
}

}  // namespace garota::ltl
