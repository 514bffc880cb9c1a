#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uvleak/circuit.hpp"
#include "uvleak/domain.hpp"
#include "uvleak/formula.hpp"
#include "uvleak/sat.hpp"
#include "uvleak/transforms.hpp"
#include "uvleak/validity.hpp"

namespace uvleak {

enum class Provenance { AutoRegEq, AutoWireEq, AutoAttackerEq, AutoRetSync, User };

std::string provenance_name(Provenance p);

struct CandidateInvariant {
  FormulaPtr formula;
  Provenance provenance = Provenance::User;
  // Register, wire or output name for auto candidates, block label for user ones.
  std::string label;
};

std::string candidate_text(const CandidateInvariant& c);

struct VerificationProblem {
  Circuit impl;
  Monitor contract;
  Monitor attacker;
  ExprPtr retire;
  unsigned lookahead = 1;
  std::set<std::string> uarch;
  // Formula text over the paired circuit (x.1, x.2, or x.1..x.4 for 4-way).
  std::vector<std::string> user_candidates;
  bool auto_candidates = true;
  // Let the symbolic initial state hold bot in registers and memory cells.
  bool bottom_states = false;
  SolverOptions solver;
};

enum class Verdict { Satisfied, NotProved, CounterexampleFound };

std::string verdict_name(Verdict v);

struct LearnStats {
  unsigned iterations_base = 0;
  unsigned iterations_inductive = 0;
  unsigned solver_queries = 0;
};

struct DroppedCandidate {
  CandidateInvariant candidate;
  bool inductive = false;
  unsigned iteration = 0;
};

struct LearnResult {
  std::vector<CandidateInvariant> learned;
  std::vector<DroppedCandidate> dropped;
  LearnStats stats;
};

// Houdini-style pruning over circuit c. Base phase: (init && F<=b assume)
// -> /\CI; inductive phase: (/\CI && F<=b assume) -> X /\CI. Every
// candidate false in a counterexample (cycle 0 resp. 1) is dropped.
LearnResult learn_inv(const Circuit& c, const FormulaPtr& initial, const FormulaPtr& assumption,
                      unsigned b, std::vector<CandidateInvariant> ci, const SolverOptions& solver = {},
                      bool bottom_states = false);

struct VerificationReport {
  Verdict verdict = Verdict::NotProved;
  std::string reason;
  bool resource_limited = false;
  std::vector<CandidateInvariant> learned;
  std::vector<DroppedCandidate> dropped;
  LearnStats stats;
  unsigned lookahead = 1;
  size_t candidates = 0;
  // State of the paired circuit refuting the final implication.
  std::optional<TraceDump> cex;
  double seconds = 0;
};

// Candidate pool over stuttering_product(compose_all({L, ATK}, impl), retire).
std::vector<CandidateInvariant> generate_candidates(const VerificationProblem& p,
                                                    const Circuit& paired);

// Circuit the engine reasons about: stuttering product of impl with both monitors.
PairedCircuit verification_circuit(const VerificationProblem& p);

VerificationReport verify(const VerificationProblem& p);

// LearnInv exactly as verify runs it, without the final check.
struct LearnRun {
  size_t candidates = 0;
  LearnResult result;
};
LearnRun learn_problem(const VerificationProblem& p);

// 4-copy union arch x arch x impl x impl, copies 1..4.
Circuit four_way_circuit(const Circuit& arch, const VerificationProblem& p);
std::vector<CandidateInvariant> generate_candidates_4way(const Circuit& arch,
                                                         const VerificationProblem& p,
                                                         const Circuit& joined);
VerificationReport verify_4way(const Circuit& arch, const VerificationProblem& p);

// Registers of impl outside uarch.
std::set<std::string> arch_registers(const Circuit& impl, const std::set<std::string>& uarch);

// r.a == r.b, cell-wise for arrays.
ExprPtr register_equal(const RegisterDecl& r, unsigned a, unsigned b);

struct IsaResult {
  bool pass = true;
  // 1: retired states disagree with the architecture; 2: ARCH changed off retirement.
  int condition = 0;
  std::optional<Valuation> initial;
  size_t cycle = 0;
  std::string message;
  uint64_t states_checked = 0;
};

IsaResult check_isa_compliance(const Circuit& impl, const Circuit& arch, const ExprPtr& retire,
                               const DomainBounds& bounds, size_t horizon);

struct OracleResult {
  bool holds = true;
  std::optional<std::pair<Valuation, Valuation>> pair;
  // Rendered traces of the violating pair.
  std::string detail;
  uint64_t states_checked = 0;
};

// Bounds used by the desk checks: 2-bit values, 4 varying memory cells, no bottom.
DomainBounds oracle_bounds();

// Pairs agreeing on uarch with equal retire-filtered L[impl] traces must have
// equal ATK[impl] traces, up to `horizon` cycles. Only states satisfying
// impl's init are considered.
OracleResult oracle_leak_order(const Circuit& impl, const Monitor& contract, const Monitor& attacker,
                               const std::set<std::string>& uarch, const ExprPtr& retire,
                               const DomainBounds& bounds, size_t horizon);

// As above, but the hypothesis compares L[arch] traces run from the ARCH part.
OracleResult oracle_contract_satisfaction(const Circuit& arch, const Circuit& impl,
                                          const Monitor& contract, const Monitor& attacker,
                                          const std::set<std::string>& uarch,
                                          const DomainBounds& bounds, size_t horizon);

// key=value lines: result, invariants_learned, iterations_base,
// iterations_inductive, solver_queries, lookahead, invariant.N, then any cex.
std::string format_report_kv(const VerificationReport& r, bool timing = false);
std::string format_report_human(const VerificationReport& r, bool timing = false);

}  // namespace uvleak
