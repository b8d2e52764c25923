#include "garota/ltl/sat.h"

#include <algorithm>
#include <cstdlib>

#include "garota/error.h"

namespace garota::ltl {

namespace {

int to_internal(int dimacs) {
  const int v = std::abs(dimacs) - 1;
  return 2 * v + (dimacs < 0 ? 1 : 0);
}

std::uint64_t luby(std::uint64_t i) {
  // 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace

int SatSolver::new_var() {
  values_.push_back(-1);
  levels_.push_back(0);
  reasons_.push_back(-1);
  phase_.push_back(0);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return num_vars();
}

int SatSolver::lit_value(int lit) const {
  const int v = values_[var_of(lit)];
  if (v < 0) return -1;
  return (lit & 1) ? 1 - v : v;
}

void SatSolver::enqueue(int lit, int reason) {
  const int v = var_of(lit);
  values_[v] = (lit & 1) ? 0 : 1;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back(lit);
}

void SatSolver::attach(int clause) {
  const auto& lits = clauses_[clause].lits;
  watches_[lits[0]].push_back(clause);
  watches_[lits[1]].push_back(clause);
}

void SatSolver::add_clause(const std::vector<int>& dimacs) {
  if (unsat_) return;
  if (level() != 0) throw Error("clauses must be added at decision level 0");
  std::vector<int> lits;
  for (int d : dimacs) {
    if (d == 0 || std::abs(d) > num_vars()) throw Error("bad literal");
    lits.push_back(to_internal(d));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && (lits[i] ^ 1) == lits[i + 1]) return;  // tautology
    const int val = lit_value(lits[i]);
    if (val == 1) return;
    if (val == -1) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return;
  }
  clauses_.push_back({std::move(kept)});
  attach(static_cast<int>(clauses_.size()) - 1);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const int false_lit = trail_[qhead_++] ^ 1;
    auto& ws = watches_[false_lit];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const int ci = ws[i];
      auto& lits = clauses_[ci].lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      if (lit_value(lits[0]) == 1) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (lit_value(lits[k]) != 0) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = ci;
      if (lit_value(lits[0]) == 0) {
        for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
        ws.resize(keep);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(lits[0], ci);
    }
    ws.resize(keep);
  }
  return -1;
}

void SatSolver::bump(int var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

void SatSolver::analyze(int conflict, std::vector<int>& learnt,
                        int& back_level) {
  learnt.assign(1, 0);  // slot for the asserting literal
  int pending = 0;
  int p = -1;
  std::size_t index = trail_.size();
  int ci = conflict;
  do {
    for (int q : clauses_[ci].lits) {
      if (q == p) continue;
      const int v = var_of(q);
      if (seen_[v] || levels_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (levels_[v] == level()) {
        ++pending;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    ci = reasons_[var_of(p)];
    seen_[var_of(p)] = 0;
    --pending;
  } while (pending > 0);
  learnt[0] = p ^ 1;

  back_level = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    seen_[var_of(learnt[i])] = 0;
    if (levels_[var_of(learnt[i])] > back_level) {
      back_level = levels_[var_of(learnt[i])];
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  var_inc_ /= 0.95;
}

void SatSolver::backtrack(int target) {
  if (level() <= target) return;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[target]);) {
    const int v = var_of(trail_[i]);
    phase_[v] = static_cast<char>(values_[v]);
    values_[v] = -1;
    reasons_[v] = -1;
  }
  trail_.resize(trail_lim_[target]);
  trail_lim_.resize(target);
  qhead_ = trail_.size();
}

int SatSolver::pick_branch() const {
  int best = -1;
  for (int v = 0; v < num_vars(); ++v) {
    if (values_[v] < 0 && (best < 0 || activity_[v] > activity_[best])) {
      best = v;
    }
  }
  return best;
}

SatSolver::Result SatSolver::solve() {
  if (unsat_) return Result::kUnsat;
  if (propagate() >= 0) {
    unsat_ = true;
    return Result::kUnsat;
  }
  std::vector<int> learnt;
  std::uint64_t restart = 0;
  std::uint64_t budget = 100 * luby(restart);
  std::uint64_t since_restart = 0;
  for (;;) {
    const int conflict = propagate();
    if (conflict >= 0) {
      ++conflicts_;
      ++since_restart;
      if (level() == 0) {
        unsat_ = true;
        return Result::kUnsat;
      }
      int back_level = 0;
      analyze(conflict, learnt, back_level);
      backtrack(back_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back({learnt});
        const int ci = static_cast<int>(clauses_.size()) - 1;
        attach(ci);
        enqueue(learnt[0], ci);
      }
      continue;
    }
    if (since_restart >= budget) {
      backtrack(0);
      since_restart = 0;
      budget = 100 * luby(++restart);
    }
    const int v = pick_branch();
    if (v < 0) return Result::kSat;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(2 * v + (phase_[v] == 1 ? 0 : 1), -1);
  }
}

}  // namespace garota::ltl
