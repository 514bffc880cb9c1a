#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uvleak/simulator.hpp"

namespace uvleak {

// Finite slice of the state space used by exhaustive checks and oracles.
struct DomainBounds {
  // Explicit values for a register; for arrays, for every enumerated cell.
  std::map<std::string, std::vector<Value>> values;
  // Other registers range over 0 .. 2^min(value_bits, width) - 1.
  std::optional<unsigned> value_bits;
  bool include_bottom = true;
  // Only the first N cells of each array vary; the rest hold memory_fill.
  std::optional<uint32_t> memory_cells;
  Value memory_fill = Value::of(0);
  uint64_t max_states = 5'000'000;
};

// Registers fixed to a constant by `x == c` conjuncts of a predicate.
std::map<std::string, Value> init_pins(const ExprPtr& init);

// Candidate values for every cell of `layout`, pins applied.
std::vector<std::vector<Value>> cell_domains(const Layout& layout, const DomainBounds& bounds,
                                             const std::map<std::string, Value>& pins = {});

// Throws DomainTooLarge when the product exceeds bounds.max_states.
uint64_t count_states(const Layout& layout, const DomainBounds& bounds,
                      const std::map<std::string, Value>& pins = {});

// Visits every valuation in the slice in a fixed order until `visit`
// returns false.
void enumerate_states(const std::shared_ptr<const Layout>& layout, const DomainBounds& bounds,
                      const std::map<std::string, Value>& pins,
                      const std::function<bool(const Valuation&)>& visit);

}  // namespace uvleak
