#include "garota/ltl/formula.h"

#include <algorithm>
#include <functional>
#include <utility>

namespace garota::ltl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Formula make(Op op, std::vector<Formula> args) {
  return std::make_shared<const Node>(op, std::string(), std::move(args));
}

Formula make_nary(Op op, std::vector<Formula> args) {
  if (args.size() < 2) throw Error("n-ary connective needs two operands");
  return make(op, std::move(args));
}

}  // namespace

Node::Node(Op op, std::string name, std::vector<Formula> args)
    : op_(op), name_(std::move(name)), args_(std::move(args)) {
  std::size_t h = std::hash<int>()(static_cast<int>(op_));
  h = mix(h, std::hash<std::string>()(name_));
  for (const auto& a : args_) h = mix(h, a->hash());
  hash_ = h;
}

Formula lit(bool value) {
  static const Formula t = make(Op::kTrue, {});
  static const Formula f = make(Op::kFalse, {});
  return value ? t : f;
}

Formula atom(std::string name) {
  return std::make_shared<const Node>(Op::kAtom, std::move(name),
                                      std::vector<Formula>{});
}

Formula neg(Formula f) { return make(Op::kNot, {std::move(f)}); }
Formula conj(Formula a, Formula b) {
  return make(Op::kAnd, {std::move(a), std::move(b)});
}
Formula conj(std::vector<Formula> args) {
  return make_nary(Op::kAnd, std::move(args));
}
Formula disj(Formula a, Formula b) {
  return make(Op::kOr, {std::move(a), std::move(b)});
}
Formula disj(std::vector<Formula> args) {
  return make_nary(Op::kOr, std::move(args));
}
Formula implies(Formula a, Formula b) {
  return make(Op::kImplies, {std::move(a), std::move(b)});
}
Formula next(Formula f) { return make(Op::kNext, {std::move(f)}); }
Formula globally(Formula f) { return make(Op::kGlobally, {std::move(f)}); }
Formula eventually(Formula f) { return make(Op::kFinally, {std::move(f)}); }
Formula until(Formula a, Formula b) {
  return make(Op::kUntil, {std::move(a), std::move(b)});
}
Formula weak_until(Formula a, Formula b) {
  return make(Op::kWeakUntil, {std::move(a), std::move(b)});
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash() || a->op() != b->op() ||
      a->name() != b->name() || a->args().size() != b->args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->args().size(); ++i) {
    if (!equal(a->arg(i), b->arg(i))) return false;
  }
  return true;
}

bool less(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return false;
  if (a->hash() != b->hash()) return a->hash() < b->hash();
  if (a->op() != b->op()) return a->op() < b->op();
  if (a->name() != b->name()) return a->name() < b->name();
  if (a->args().size() != b->args().size()) {
    return a->args().size() < b->args().size();
  }
  for (std::size_t i = 0; i < a->args().size(); ++i) {
    if (less(a->arg(i), b->arg(i))) return true;
    if (less(b->arg(i), a->arg(i))) return false;
  }
  return false;
}

bool is_temporal_op(Op op) {
  switch (op) {
    case Op::kNext:
    case Op::kGlobally:
    case Op::kFinally:
    case Op::kUntil:
    case Op::kWeakUntil:
      return true;
    default:
      return false;
  }
}

namespace {

int level(Op op) {
  switch (op) {
    case Op::kImplies: return 1;
    case Op::kUntil:
    case Op::kWeakUntil: return 2;
    case Op::kOr: return 3;
    case Op::kAnd: return 4;
    case Op::kNot:
    case Op::kNext:
    case Op::kGlobally:
    case Op::kFinally: return 5;
    default: return 6;
  }
}

void render(const Formula& f, int min_level, std::string& out);

void render_child(const Formula& f, int min_level, std::string& out) {
  if (level(f->op()) < min_level) {
    out += '(';
    render(f, 0, out);
    out += ')';
  } else {
    render(f, min_level, out);
  }
}

void render(const Formula& f, int, std::string& out) {
  switch (f->op()) {
    case Op::kTrue: out += "true"; return;
    case Op::kFalse: out += "false"; return;
    case Op::kAtom: out += f->name(); return;
    case Op::kNot:
      out += '!';
      render_child(f->arg(0), 5, out);
      return;
    case Op::kNext:
    case Op::kGlobally:
    case Op::kFinally: {
      out += f->op() == Op::kNext ? 'X' : f->op() == Op::kGlobally ? 'G' : 'F';
      if (level(f->arg(0)->op()) >= 5) out += ' ';
      render_child(f->arg(0), 5, out);
      return;
    }
    case Op::kAnd:
    case Op::kOr: {
      const int l = level(f->op());
      const char* sep = f->op() == Op::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < f->args().size(); ++i) {
        if (i > 0) out += sep;
        // Left-associative: only the first operand may share the level.
        render_child(f->arg(i), i == 0 ? l : l + 1, out);
      }
      return;
    }
    case Op::kImplies:
    case Op::kUntil:
    case Op::kWeakUntil: {
      const int l = level(f->op());
      const char* sep = f->op() == Op::kImplies ? " -> "
                        : f->op() == Op::kUntil ? " U "
                                                : " W ";
      render_child(f->arg(0), l + 1, out);
      out += sep;
      render_child(f->arg(1), l, out);
      return;
    }
  }
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f->op() == Op::kAtom) out.insert(f->name());
  for (const auto& a : f->args()) collect_atoms(a, out);
}

Formula rebuild(const Formula& f, std::vector<Formula> args) {
  return std::make_shared<const Node>(f->op(), f->name(), std::move(args));
}

template <typename Fn>
Formula map_args(const Formula& f, Fn&& fn) {
  std::vector<Formula> args;
  args.reserve(f->args().size());
  bool changed = false;
  for (const auto& a : f->args()) {
    args.push_back(fn(a));
    changed = changed || args.back().get() != a.get();
  }
  return changed ? rebuild(f, std::move(args)) : f;
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  render(f, 0, out);
  return out;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

bool is_propositional(const Formula& f) {
  if (is_temporal_op(f->op())) return false;
  for (const auto& a : f->args()) {
    if (!is_propositional(a)) return false;
  }
  return true;
}

Formula expand_weak_until(const Formula& f) {
  auto g = map_args(f, [](const Formula& a) { return expand_weak_until(a); });
  if (g->op() != Op::kWeakUntil) return g;
  return disj(until(g->arg(0), g->arg(1)), globally(g->arg(0)));
}

namespace {

Formula nnf_of(const Formula& f, bool negated) {
  const auto& a = f->args();
  switch (f->op()) {
    case Op::kTrue:
    case Op::kFalse:
      return lit((f->op() == Op::kTrue) != negated);
    case Op::kAtom:
      return negated ? neg(f) : f;
    case Op::kNot:
      return nnf_of(a[0], !negated);
    case Op::kAnd:
    case Op::kOr: {
      std::vector<Formula> args;
      for (const auto& x : a) args.push_back(nnf_of(x, negated));
      const bool is_and = (f->op() == Op::kAnd) != negated;
      return is_and ? conj(std::move(args)) : disj(std::move(args));
    }
    case Op::kImplies:
      if (negated) return conj(nnf_of(a[0], false), nnf_of(a[1], true));
      return disj(nnf_of(a[0], true), nnf_of(a[1], false));
    case Op::kNext:
      return next(nnf_of(a[0], negated));
    case Op::kGlobally:
      return negated ? eventually(nnf_of(a[0], true))
                     : globally(nnf_of(a[0], false));
    case Op::kFinally:
      return negated ? globally(nnf_of(a[0], true))
                     : eventually(nnf_of(a[0], false));
    case Op::kUntil:
      // !(a U b) == !b W (!a & !b)
      if (negated) {
        return weak_until(nnf_of(a[1], true),
                          conj(nnf_of(a[0], true), nnf_of(a[1], true)));
      }
      return until(nnf_of(a[0], false), nnf_of(a[1], false));
    case Op::kWeakUntil:
      // !(a W b) == !b U (!a & !b)
      if (negated) {
        return until(nnf_of(a[1], true),
                     conj(nnf_of(a[0], true), nnf_of(a[1], true)));
      }
      return weak_until(nnf_of(a[0], false), nnf_of(a[1], false));
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_of(f, false); }

Formula substitute(const Formula& f,
                   const std::vector<std::pair<std::string, Formula>>& values) {
  if (f->op() == Op::kAtom) {
    for (const auto& [name, value] : values) {
      if (name == f->name()) return value;
    }
    return f;
  }
  return map_args(f, [&](const Formula& a) { return substitute(a, values); });
}

}  // namespace garota::ltl
