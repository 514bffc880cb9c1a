#pragma once

#include <string>
#include <vector>

#include "uvleak/circuit.hpp"
#include "uvleak/validate.hpp"

namespace uvleak {

struct MonitorCheck {
  bool is_monitoring = false;
  bool is_combinatorial = false;
  Diagnostics diagnostics;
};

MonitorCheck check_monitor(const Monitor& m, const Circuit& c);

// M[C]: C's registers, wires and assignments plus M's, with M's outputs.
// Throws PreconditionError unless m is monitoring on c.
Circuit compose(const Monitor& m, const Circuit& c);

// Like compose, but keeps c's outputs and appends every monitor's outputs.
// Used to put a contract and an attacker onto one implementation.
Circuit compose_all(const std::vector<const Monitor*>& ms, const Circuit& c);

// "x" -> "x.<copy>"
std::string tag_name(const std::string& name, unsigned copy);
ExprPtr tag(const ExprPtr& e, unsigned copy);
Circuit tag_circuit(const Circuit& c, unsigned copy);

enum class PairKind { Plain, Stuttering };

struct PairedCircuit {
  Circuit circuit;
  PairKind kind = PairKind::Plain;
  // Untagged synchronization predicate for stuttering products.
  ExprPtr phi;
  unsigned copies = 2;
};

PairedCircuit product(const Circuit& c);

// Each x.1 <= e.1 becomes x.1 <= (phi.1 && !phi.2) ? x.1 : e.1, and the
// other copy symmetrically. Array writes are disabled instead.
PairedCircuit stuttering_product(const Circuit& c, const ExprPtr& phi);

// Disjoint union of tagged copies: parts[i] is tagged with copies[i].
// Init predicates are conjoined.
Circuit tagged_union(const std::string& name, const std::vector<const Circuit*>& parts,
                     const std::vector<unsigned>& copies);

}  // namespace uvleak
