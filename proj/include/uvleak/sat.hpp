#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace uvleak {

// DIMACS-style literal: +v or -v for variable v >= 1.
using Lit = int;

// Clause database with structurally hashed Tseitin gates. Variable 1 is
// constrained true, so Lit 1 and -1 are the constants.
class CnfBuilder {
 public:
  CnfBuilder();

  static constexpr Lit kTrue = 1;
  static constexpr Lit kFalse = -1;

  Lit new_var();
  int num_vars() const { return num_vars_; }
  void add_clause(std::vector<Lit> lits);
  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }

  Lit land(Lit a, Lit b);
  Lit lor(Lit a, Lit b) { return -land(-a, -b); }
  Lit lxor(Lit a, Lit b);
  Lit liff(Lit a, Lit b) { return -lxor(a, b); }
  Lit implies(Lit a, Lit b) { return lor(-a, b); }
  Lit ite(Lit c, Lit t, Lit e);
  Lit land_all(std::span<const Lit> ls);
  Lit lor_all(std::span<const Lit> ls);

 private:
  int num_vars_ = 0;
  std::vector<std::vector<Lit>> clauses_;
  std::unordered_map<uint64_t, Lit> and_cache_;
  std::unordered_map<uint64_t, Lit> xor_cache_;
  std::map<std::tuple<Lit, Lit, Lit>, Lit> ite_cache_;
};

enum class SatResult { Sat, Unsat, Unknown };

struct SolverOptions {
  // 0 means unlimited.
  uint64_t conflict_budget = 0;
  double time_limit_secs = 0;
  uint64_t seed = 0;
};

struct SolverStats {
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t conflicts = 0;
  uint64_t restarts = 0;
  uint64_t learnts_removed = 0;
};

// Conflict-driven clause learning: two watched literals, first-UIP learning
// with clause minimization, VSIDS, phase saving, Luby restarts and learnt
// clause reduction.
class Solver {
 public:
  explicit Solver(SolverOptions opts = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int new_var();
  int num_vars() const;
  // Returns false once the clause set is known unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  SatResult solve(std::span<const Lit> assumptions = {});
  // Valid after Sat.
  bool model_value(Lit l) const;
  const SolverStats& stats() const;

 private:
  struct Impl;
  Impl* impl_;
};

struct SatOutcome {
  SatResult result = SatResult::Unknown;
  // model[v] for v in 1..num_vars, meaningful when result is Sat.
  std::vector<bool> model;
  bool value(Lit l) const { return l > 0 ? model[l] : !model[-l]; }
};

std::string to_dimacs(int num_vars, const std::vector<std::vector<Lit>>& clauses,
                      std::span<const Lit> assumptions = {});

// Parses "s ..." and "v ..." lines of a solver's standard output.
SatOutcome parse_solver_output(const std::string& out, int num_vars);

// Runs `solver_path <file>` on a DIMACS dump. Throws Error when the solver
// cannot be run or answers nonsense.
SatOutcome run_external_solver(const std::string& solver_path, int num_vars,
                               const std::vector<std::vector<Lit>>& clauses,
                               std::span<const Lit> assumptions, double time_limit_secs);

// Solves with the internal solver, or with $UVLEAK_SOLVER when set.
// $UVLEAK_LIMIT_SECS caps the wall-clock time of one call.
SatOutcome solve_cnf(const CnfBuilder& cnf, const SolverOptions& opts,
                     std::span<const Lit> assumptions = {});

}  // namespace uvleak
