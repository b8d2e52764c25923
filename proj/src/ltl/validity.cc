#include "garota/ltl/validity.h"

#include <algorithm>
#include <chrono>
#include <random>
#include <unordered_map>

#include "garota/ltl/sat.h"
#include "garota/ltl/synth.h"

namespace garota::ltl {

namespace {

// Tseitin-style encoding of an NNF formula on one lasso shape: n positions,
// position n-1 followed by position `loop`. Only the implication from each
// node variable to its meaning is emitted, which suffices for satisfiability
// because NNF is monotone. Eventualities unroll the loop once through an
// auxiliary chain that ends in false (least fixpoint) or true (greatest).
class LassoEncoder {
 public:
  LassoEncoder(SatSolver& s, const Alphabet& alphabet, std::size_t n,
               std::size_t loop)
      : s_(s), alphabet_(alphabet), n_(n), loop_(loop) {
    true_ = s_.new_var();
    s_.add_clause({true_});
    atom_vars_.resize(n * alphabet.size());
    for (auto& v : atom_vars_) v = s_.new_var();
  }

  int atom_var(std::size_t pos, std::size_t bit) const {
    return atom_vars_[pos * alphabet_.size() + bit];
  }

  int encode(const Formula& f, std::size_t i) {
    auto& slots = memo_[f];
    if (slots.empty()) slots.assign(n_, 0);
    if (slots[i] != 0) return slots[i];
    const int lit = build(f, i);
    memo_[f][i] = lit;
    return lit;
  }

 private:
  std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : loop_; }

  int fresh() { return s_.new_var(); }

  // v -> release | (hold & next)
  void step(int v, int release, int hold, int next) {
    const int c = fresh();
    s_.add_clause({-v, release, c});
    s_.add_clause({-c, hold});
    s_.add_clause({-c, next});
  }

  int build(const Formula& f, std::size_t i) {
    const auto& a = f->args();
    switch (f->op()) {
      case Op::kTrue: return true_;
      case Op::kFalse: return -true_;
      case Op::kAtom: return atom_var(i, *alphabet_.index(f->name()));
      case Op::kNot:
        if (a[0]->op() != Op::kAtom) throw Error("encoder expects NNF");
        return -atom_var(i, *alphabet_.index(a[0]->name()));
      case Op::kAnd: {
        const int v = fresh();
        for (const auto& k : a) s_.add_clause({-v, encode(k, i)});
        return v;
      }
      case Op::kOr: {
        const int v = fresh();
        std::vector<int> clause = {-v};
        for (const auto& k : a) clause.push_back(encode(k, i));
        s_.add_clause(clause);
        return v;
      }
      case Op::kNext: return encode(a[0], succ(i));
      case Op::kUntil: return fixpoint(f, i, a[0], a[1], false);
      case Op::kFinally: return fixpoint(f, i, nullptr, a[0], false);
      case Op::kWeakUntil: return fixpoint(f, i, a[0], a[1], true);
      case Op::kGlobally: return fixpoint(f, i, a[0], nullptr, true);
      case Op::kImplies: break;
    }
    throw Error("encoder expects NNF");
  }

  int fixpoint(const Formula& f, std::size_t i, const Formula& hold_f,
               const Formula& release_f, bool greatest) {
    auto hold = [&](std::size_t j) {
      return hold_f ? encode(hold_f, j) : true_;
    };
    auto release = [&](std::size_t j) {
      return release_f ? encode(release_f, j) : -true_;
    };
    const int v = fresh();
    if (i + 1 < n_) {
      step(v, release(i), hold(i), encode(f, i + 1));
      return v;
    }
    // Position n-1: the rest of the word is one more pass over the loop.
    std::vector<int> aux(n_, 0);
    for (std::size_t j = loop_; j < n_; ++j) aux[j] = fresh();
    for (std::size_t j = loop_; j < n_; ++j) {
      const int next = j + 1 < n_ ? aux[j + 1] : (greatest ? true_ : -true_);
      step(aux[j], release(j), hold(j), next);
    }
    step(v, release(i), hold(i), aux[loop_]);
    return v;
  }

  SatSolver& s_;
  const Alphabet& alphabet_;
  std::size_t n_;
  std::size_t loop_;
  int true_ = 0;
  std::vector<int> atom_vars_;
  std::unordered_map<Formula, std::vector<int>, FormulaHash, FormulaEq> memo_;
};

LassoWord split(const std::vector<Letter>& letters, std::size_t loop) {
  LassoWord w;
  w.prefix.assign(letters.begin(), letters.begin() + loop);
  w.loop.assign(letters.begin() + loop, letters.end());
  return w;
}

// Calls `visit` on every word in letters^n until it returns true.
template <typename Visit>
bool for_each_word(const std::vector<Letter>& letters, std::size_t n,
                   Visit&& visit) {
  std::vector<std::size_t> idx(n, 0);
  std::vector<Letter> word(n, letters[0]);
  for (;;) {
    if (visit(word)) return true;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < letters.size()) {
        word[k] = letters[idx[k]];
        break;
      }
      idx[k] = 0;
      word[k] = letters[0];
      if (k == 0) return false;
    }
    if (n == 0) return false;
  }
}

}  // namespace

std::string to_string(const ValidityResult& r) {
  if (!r.counterexample) {
    return "NoCounterexampleUpTo(" + std::to_string(r.bound) + ")";
  }
  std::string out = "Counterexample(\n";
  out += lasso_to_string(r.alphabet, *r.counterexample);
  out += "\n)";
  return out;
}

ValidityResult check_validity(const std::vector<Formula>& antecedents,
                              const Formula& consequent,
                              std::size_t max_total_len,
                              const ValidityOptions& options) {
  if (max_total_len < 2) throw Error("bound must be at least 2");

  std::vector<Formula> parts = antecedents;
  parts.push_back(neg(consequent));
  const Formula goal = parts.size() == 1 ? parts[0] : conj(parts);

  ValidityResult r;
  r.bound = max_total_len;
  r.alphabet = Alphabet::of(atoms(goal));
  const Alphabet& alphabet = r.alphabet;

  // Axiom atoms outside the formulas stay existentially quantified: they
  // become free per-position variables in the SAT encoding.
  std::vector<Formula> axiom_bodies;
  std::vector<std::string> ext_names = alphabet.names();
  for (const auto& ax : options.axioms) {
    const auto g = GuardedSafety::of(ax);
    if (g.lookahead) throw Error("axioms must be per-position");
    axiom_bodies.push_back(g.body);
    for (const auto& a : atoms(ax)) {
      if (!alphabet.contains(a)) {
        ext_names.push_back(a);
        std::sort(ext_names.begin() + alphabet.size(), ext_names.end());
        ext_names.erase(std::unique(ext_names.begin() + alphabet.size(),
                                    ext_names.end()),
                        ext_names.end());
      }
    }
  }
  const Alphabet ext(ext_names);

  const LassoEvaluator eval(goal, alphabet);

  // Word space size decides between enumeration and SAT.
  std::vector<Letter> letters;
  const bool have_letters =
      alphabet.size() <= 16 && ext.size() - alphabet.size() <= 20;
  bool small = have_letters;
  if (have_letters) {
    letters = consistent_letters(alphabet, options.axioms);
    double space = 0, pow = 1;
    for (std::size_t n = 1; n <= max_total_len; ++n) {
      pow *= static_cast<double>(letters.size());
      space += pow * static_cast<double>(n);
    }
    small = space <= double(1 << 18);
  }
  SearchMethod method = options.method;
  if (method == SearchMethod::kAuto) {
    method = small ? SearchMethod::kEnumerate : SearchMethod::kSat;
  }
  if (method == SearchMethod::kEnumerate && !small) {
    throw Error("alphabet too large to enumerate");
  }

  if (method == SearchMethod::kEnumerate) {
    if (letters.empty()) return r;
    for (std::size_t n = 1; n <= max_total_len && !r.counterexample; ++n) {
      for (std::size_t loop = 0; loop < n && !r.counterexample; ++loop) {
        for_each_word(letters, n, [&](const std::vector<Letter>& word) {
          ++r.queries;
          auto w = split(word, loop);
          if (!eval(w)) return false;
          r.counterexample = std::move(w);
          return true;
        });
      }
    }
  } else {
    const Formula root = nnf(goal);
    std::vector<Formula> axiom_nnf;
    for (const auto& b : axiom_bodies) axiom_nnf.push_back(nnf(b));
    for (std::size_t n = 1; n <= max_total_len && !r.counterexample; ++n) {
      for (std::size_t loop = 0; loop < n && !r.counterexample; ++loop) {
        ++r.queries;
        SatSolver solver;
        LassoEncoder enc(solver, ext, n, loop);
        for (std::size_t i = 0; i < n; ++i) {
          for (const auto& b : axiom_nnf) solver.add_clause({enc.encode(b, i)});
        }
        solver.add_clause({enc.encode(root, 0)});
        if (solver.solve() != SatSolver::Result::kSat) continue;
        std::vector<Letter> word(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t b = 0; b < alphabet.size(); ++b) {
            word[i] = with(word[i], b, solver.value(enc.atom_var(i, b)));
          }
        }
        auto w = split(word, loop);
        if (!eval(w)) throw Error("SAT model is not a counterexample");
        r.counterexample = std::move(w);
      }
    }
  }

  if (!r.counterexample && options.samples > 0 && !letters.empty()) {
    std::mt19937_64 rng(options.seed);
    const std::size_t max_len = max_total_len + options.sample_extra_len;
    auto random_letter = [&]() {
      return letters[std::uniform_int_distribution<std::size_t>(
          0, letters.size() - 1)(rng)];
    };
    for (std::size_t k = 0; k < options.samples && !r.counterexample; ++k) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(
          max_total_len + 1, max_len)(rng);
      const std::size_t loop =
          std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      std::vector<Letter> word(n);
      for (auto& l : word) l = random_letter();
      ++r.samples;
      auto w = split(word, loop);
      if (eval(w)) r.counterexample = std::move(w);
    }
  }
  return r;
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kT1: return "T1";
    case TheoremId::kT2: return "T2";
    case TheoremId::kT1Weakened: return "T1_weakened";
    case TheoremId::kT2Weakened: return "T2_weakened";
  }
  return "?";
}

TheoremId parse_theorem(const std::string& s) {
  for (auto id : {TheoremId::kT1, TheoremId::kT2, TheoremId::kT1Weakened,
                  TheoremId::kT2Weakened}) {
    if (to_string(id) == s) return id;
  }
  throw Error("unknown theorem '" + s + "'");
}

TheoremSpec theorem_spec(TheoremId id) {
  const std::vector<std::string> model = {"ltl1", "ltl2", "ltl3", "ltl4a",
                                          "ltl4b"};
  TheoremSpec t{id, model, "", true};
  switch (id) {
    case TheoremId::kT1:
    case TheoremId::kT1Weakened:
      t.antecedents.insert(t.antecedents.end(), {"ltl5", "ltl6"});
      if (id == TheoremId::kT1) t.antecedents.push_back("ltl7");
      t.consequent = "def2";
      break;
    case TheoremId::kT2:
    case TheoremId::kT2Weakened:
      t.antecedents.insert(t.antecedents.end(), {"ltl5", "ltl8", "ltl9"});
      if (id == TheoremId::kT2) t.antecedents.push_back("ltl10");
      t.consequent = "def3";
      break;
  }
  t.expect_valid = id == TheoremId::kT1 || id == TheoremId::kT2;
  return t;
}

TheoremReport theorem_check(TheoremId id, const FormulaSet& set,
                            std::size_t bound, const ValidityOptions& base) {
  TheoremReport rep{id, theorem_spec(id), {}, false, 0.0};
  std::vector<Formula> ants;
  for (const auto& name : rep.spec.antecedents) ants.push_back(set.get(name));
  ValidityOptions options = base;
  if (options.axioms.empty()) options.axioms = set.with_prefix("_ax_");
  const auto t0 = std::chrono::steady_clock::now();
  rep.result = check_validity(ants, set.get(rep.spec.consequent), bound,
                              options);
  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  rep.as_expected = rep.result.valid_up_to_bound() == rep.spec.expect_valid;
  return rep;
}

std::string to_string(const TheoremReport& r) {
  std::string out = to_string(r.id) + ": ";
  for (std::size_t i = 0; i < r.spec.antecedents.size(); ++i) {
    out += (i ? ", " : "") + r.spec.antecedents[i];
  }
  out += " |- " + r.spec.consequent + "\n  " + to_string(r.result);
  out += "\n  expected ";
  out += r.spec.expect_valid ? "NoCounterexample" : "Counterexample";
  out += r.as_expected ? ": ok" : ": UNEXPECTED";
  return out;
}

}  // namespace garota::ltl
