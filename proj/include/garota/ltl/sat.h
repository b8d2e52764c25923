#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace garota::ltl {

// Small CDCL solver: two watched literals, first-UIP learning, activity
// ordering with phase saving, Luby restarts. Literals are DIMACS style:
// +v / -v for variable v >= 1.
class SatSolver {
 public:
  enum class Result { kSat, kUnsat };

  int new_var();
  int num_vars() const { return static_cast<int>(values_.size()); }
  void add_clause(const std::vector<int>& lits);
  Result solve();

  // Model access after kSat.
  bool value(int var) const { return values_[var - 1] == 1; }

  std::uint64_t conflicts() const { return conflicts_; }
  std::size_t num_clauses() const { return clauses_.size(); }

 private:
  struct Clause {
    std::vector<int> lits;  // internal encoding 2*var + negated
  };

  static int var_of(int lit) { return lit >> 1; }
  int lit_value(int lit) const;  // 1 true, 0 false, -1 unassigned
  void enqueue(int lit, int reason);
  int propagate();  // conflicting clause index or -1
  void analyze(int conflict, std::vector<int>& learnt, int& back_level);
  void backtrack(int level);
  int pick_branch() const;
  void bump(int var);
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void attach(int clause);

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // by literal
  std::vector<signed char> values_;        // by var: -1, 0, 1
  std::vector<int> levels_;
  std::vector<int> reasons_;
  std::vector<char> phase_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  bool unsat_ = false;
  std::uint64_t conflicts_ = 0;
};

}  // namespace garota::ltl
