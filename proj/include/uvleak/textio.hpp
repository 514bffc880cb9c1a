#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uvleak/circuit.hpp"
#include "uvleak/formula.hpp"

namespace uvleak {

struct ParseOptions {
  // Accept copy-tagged names such as x.1 in circuit sources. Used when
  // re-reading printed product circuits.
  bool allow_tagged = false;
};

// User-supplied candidate invariants over the paired circuit of `target`.
// Formulas are kept as text and resolved once the paired circuit exists.
struct CandidateBlock {
  std::string name;
  std::string target;
  std::vector<std::string> formulas;
  // Highest copy tag mentioned, 2 for two-copy blocks and 4 for 4-way ones.
  unsigned max_copy = 0;
};

struct Design {
  std::vector<Circuit> circuits;
  std::vector<Monitor> monitors;
  std::vector<CandidateBlock> candidate_blocks;

  const Circuit* find_circuit(std::string_view name) const;
  const Monitor* find_monitor(std::string_view name) const;
  const CandidateBlock* find_candidates(std::string_view name) const;
};

Design parse_design(std::string_view text, const ParseOptions& opts = {});

// Accepts either a single `circuit NAME { ... }` item or a bare body, which
// yields a circuit named "main" of width 8. Undeclared identifiers are left
// for validate().
Circuit parse_circuit(std::string_view text, const ParseOptions& opts = {});

// With `over`, every identifier must be declared there.
ExprPtr parse_expression(std::string_view text, const Circuit* over = nullptr);

// Identifiers resolve against `over`; a top-level `a == b` over two arrays
// expands to a cell-wise conjunction.
FormulaPtr parse_formula(std::string_view text, const Circuit& over);
FormulaPtr parse_formula(std::string_view text);

std::string print_expr(const ExprPtr& e);
std::string print_formula(const Formula& f);
std::string print_circuit(const Circuit& c);
std::string print_monitor(const Monitor& m);
std::string print_design(const Design& d);

std::string read_text_file(const std::string& path);

}  // namespace uvleak
