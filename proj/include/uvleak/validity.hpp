#pragma once

#include <optional>
#include <vector>

#include "uvleak/bitblast.hpp"
#include "uvleak/domain.hpp"
#include "uvleak/formula.hpp"
#include "uvleak/sat.hpp"
#include "uvleak/simulator.hpp"
#include "uvleak/trace.hpp"

namespace uvleak {

enum class Backend { Exhaustive, Symbolic };

// A concrete initial state and its simulated run, refuting some formula.
struct CexTrace {
  Valuation initial;
  std::vector<Valuation> states;
};

struct ValidityResult {
  bool valid = false;
  std::optional<CexTrace> cex;
  // Symbolic backend only.
  int cnf_vars = 0;
  size_t cnf_clauses = 0;
};

struct SymbolicOptions {
  // Restrict cycle 0 to this state.
  std::optional<Valuation> pinned;
  SolverOptions solver;
};

// Valid iff f holds at cycle 0 of every run from a state in `bounds`.
// f must not contain G. Throws DomainTooLarge (exhaustive) or
// ResourceLimit (symbolic).
ValidityResult check_validity(const Circuit& c, const Formula& f, Backend backend,
                              const DomainBounds& bounds = {}, const SymbolicOptions& opts = {});

// Adds clauses restricting the cycle-0 state of `u` to `bounds`.
void constrain_to_bounds(Unrolling& u, const DomainBounds& bounds);

// Registers (arrays as name[k]) per cycle, for reports.
TraceDump state_dump(const Circuit& c, const std::vector<Valuation>& states);

}  // namespace uvleak
