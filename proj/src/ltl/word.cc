#include "garota/ltl/word.h"

#include <algorithm>
#include <unordered_map>

namespace garota::ltl {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtoms) throw Error("alphabet exceeds 64 atoms");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) {
        throw Error("duplicate atom '" + names_[i] + "' in alphabet");
      }
    }
  }
}

Alphabet Alphabet::of(const std::set<std::string>& names) {
  return Alphabet(std::vector<std::string>(names.begin(), names.end()));
}

std::optional<std::size_t> Alphabet::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::string letter_to_string(const Alphabet& alphabet, Letter l) {
  std::string out = "{";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i > 0) out += ", ";
    if (!has(l, i)) out += '!';
    out += alphabet.name(i);
  }
  return out + "}";
}

std::string lasso_to_string(const Alphabet& alphabet, const LassoWord& w) {
  std::string out = "prefix:";
  for (auto l : w.prefix) out += "\n  " + letter_to_string(alphabet, l);
  out += "\nloop:";
  for (auto l : w.loop) out += "\n  " + letter_to_string(alphabet, l);
  return out;
}

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::kHolds: return "Holds";
    case VerdictKind::kViolated:
      return "Violated(" + std::to_string(v.position) + ")";
    case VerdictKind::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

void require_atoms(const Formula& f, const Alphabet& alphabet) {
  for (const auto& name : atoms(f)) {
    if (!alphabet.contains(name)) {
      throw UnknownAtom("atom '" + name + "' has no valuation");
    }
  }
}

namespace {

bool is_const(const Formula& f, bool value) {
  return f->op() == (value ? Op::kTrue : Op::kFalse);
}

// Simplifying constructors over NNF formulas.
Formula mk_junction(Op op, const std::vector<Formula>& in) {
  const bool is_and = op == Op::kAnd;
  std::vector<Formula> args;
  for (const auto& a : in) {
    if (is_const(a, !is_and)) return lit(!is_and);  // absorbing element
    if (is_const(a, is_and)) continue;              // unit
    if (a->op() == op) {
      args.insert(args.end(), a->args().begin(), a->args().end());
    } else {
      args.push_back(a);
    }
  }
  std::sort(args.begin(), args.end(), less);
  args.erase(std::unique(args.begin(), args.end(), equal), args.end());
  for (const auto& a : args) {
    if (a->op() != Op::kNot) continue;
    for (const auto& b : args) {
      if (equal(a->arg(0), b)) return lit(!is_and);
    }
  }
  if (args.empty()) return lit(is_and);
  if (args.size() == 1) return args[0];
  return is_and ? conj(std::move(args)) : disj(std::move(args));
}

Formula mk_and(const std::vector<Formula>& a) { return mk_junction(Op::kAnd, a); }
Formula mk_or(const std::vector<Formula>& a) { return mk_junction(Op::kOr, a); }

class Progressor {
 public:
  Progressor(const Alphabet& alphabet, Letter letter)
      : alphabet_(alphabet), letter_(letter) {}

  Formula operator()(const Formula& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    auto r = progress(f);
    memo_.emplace(f.get(), r);
    return r;
  }

 private:
  bool value(const Formula& a) const {
    return has(letter_, *alphabet_.index(a->name()));
  }

  Formula progress(const Formula& f) {
    const auto& a = f->args();
    switch (f->op()) {
      case Op::kTrue:
      case Op::kFalse:
        return f;
      case Op::kAtom:
        return lit(value(f));
      case Op::kNot:
        return lit(!value(a[0]));  // NNF: operand is an atom
      case Op::kAnd:
      case Op::kOr: {
        std::vector<Formula> args;
        for (const auto& x : a) args.push_back((*this)(x));
        return f->op() == Op::kAnd ? mk_and(args) : mk_or(args);
      }
      case Op::kNext:
        return a[0];
      case Op::kGlobally:
        return mk_and({(*this)(a[0]), f});
      case Op::kFinally:
        return mk_or({(*this)(a[0]), f});
      case Op::kUntil:
      case Op::kWeakUntil:
        return mk_or({(*this)(a[1]), mk_and({(*this)(a[0]), f})});
      case Op::kImplies:
        break;
    }
    throw Error("progression expects negation normal form");
  }

  const Alphabet& alphabet_;
  Letter letter_;
  std::unordered_map<const Node*, Formula> memo_;
};

}  // namespace

Verdict eval_on_trace(const Formula& f, const Alphabet& alphabet,
                      const std::vector<Letter>& trace) {
  if (trace.empty()) throw Error("eval_on_trace needs a non-empty trace");
  require_atoms(f, alphabet);
  Formula residual = nnf(f);
  for (std::size_t p = 0; p < trace.size(); ++p) {
    residual = Progressor(alphabet, trace[p])(residual);
    if (is_const(residual, false)) return Verdict::violated(p);
    if (is_const(residual, true)) return Verdict::holds();
  }
  return Verdict::inconclusive();
}

LassoEvaluator::LassoEvaluator(const Formula& f, const Alphabet& alphabet) {
  require_atoms(f, alphabet);
  std::unordered_map<Formula, std::size_t, FormulaHash, FormulaEq> index;
  auto compile = [&](auto&& self, const Formula& g) -> std::size_t {
    if (auto it = index.find(g); it != index.end()) return it->second;
    Cell cell{g->op(), 0, {}};
    if (g->op() == Op::kAtom) cell.bit = *alphabet.index(g->name());
    for (const auto& a : g->args()) cell.kids.push_back(self(self, a));
    cells_.push_back(std::move(cell));
    index.emplace(g, cells_.size() - 1);
    return cells_.size() - 1;
  };
  compile(compile, f);
}

bool LassoEvaluator::operator()(const LassoWord& w) const {
  if (w.loop.empty()) throw Error("lasso loop must be non-empty");
  const std::size_t n = w.size();
  const std::size_t loop_start = w.prefix.size();
  auto letter = [&](std::size_t i) {
    return i < loop_start ? w.prefix[i] : w.loop[i - loop_start];
  };
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };

  std::vector<std::vector<char>> val(cells_.size(), std::vector<char>(n, 0));
  // Fixpoint over the successor relation: val[i] = base[i] || (keep[i] && val[succ i]).
  auto fixpoint = [&](std::vector<char>& v, auto base, auto keep, bool init) {
    std::fill(v.begin(), v.end(), init);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n; k-- > 0;) {
        const char next = base(k) || (keep(k) && v[succ(k)]);
        if (next != v[k]) {
          v[k] = next;
          changed = true;
        }
      }
    }
  };

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    auto& v = val[c];
    const auto kid = [&](std::size_t j) -> const std::vector<char>& {
      return val[cell.kids[j]];
    };
    switch (cell.op) {
      case Op::kTrue: std::fill(v.begin(), v.end(), 1); break;
      case Op::kFalse: break;
      case Op::kAtom:
        for (std::size_t i = 0; i < n; ++i) v[i] = has(letter(i), cell.bit);
        break;
      case Op::kNot:
        for (std::size_t i = 0; i < n; ++i) v[i] = !kid(0)[i];
        break;
      case Op::kAnd:
        std::fill(v.begin(), v.end(), 1);
        for (std::size_t j = 0; j < cell.kids.size(); ++j) {
          for (std::size_t i = 0; i < n; ++i) v[i] = v[i] && kid(j)[i];
        }
        break;
      case Op::kOr:
        for (std::size_t j = 0; j < cell.kids.size(); ++j) {
          for (std::size_t i = 0; i < n; ++i) v[i] = v[i] || kid(j)[i];
        }
        break;
      case Op::kImplies:
        for (std::size_t i = 0; i < n; ++i) v[i] = !kid(0)[i] || kid(1)[i];
        break;
      case Op::kNext:
        for (std::size_t i = 0; i < n; ++i) v[i] = kid(0)[succ(i)];
        break;
      case Op::kGlobally: {
        const auto& a = kid(0);
        fixpoint(v, [](std::size_t) { return false; },
                 [&](std::size_t i) { return a[i] != 0; }, true);
        break;
      }
      case Op::kFinally: {
        const auto& a = kid(0);
        fixpoint(v, [&](std::size_t i) { return a[i] != 0; },
                 [](std::size_t) { return true; }, false);
        break;
      }
      case Op::kUntil:
      case Op::kWeakUntil: {
        const auto& a = kid(0);
        const auto& b = kid(1);
        fixpoint(v, [&](std::size_t i) { return b[i] != 0; },
                 [&](std::size_t i) { return a[i] != 0; },
                 cell.op == Op::kWeakUntil);
        break;
      }
    }
  }
  return val.back()[0] != 0;
}

bool eval_on_lasso(const Formula& f, const Alphabet& alphabet,
                   const LassoWord& w) {
  return LassoEvaluator(f, alphabet)(w);
}

}  // namespace garota::ltl
