#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uvleak/expr.hpp"

namespace uvleak {

struct RegisterDecl {
  std::string name;
  unsigned width = 8;
  // Present for array registers (memories).
  std::optional<uint32_t> length;
  // Value used when a simulation does not say otherwise.
  std::optional<uint64_t> reset;

  bool is_array() const { return length.has_value(); }
  uint32_t cells() const { return length.value_or(1); }
};

struct Wire {
  std::string name;
  ExprPtr expr;
};

// `target <= value`, or `target[index] <= value when enable` for arrays.
// A missing enable means the write always happens.
struct Assignment {
  std::string target;
  ExprPtr index;
  ExprPtr value;
  ExprPtr enable;
};

struct Circuit {
  std::string name;
  unsigned width = 8;
  std::vector<RegisterDecl> registers;
  std::vector<Wire> wires;
  std::vector<Assignment> assignments;
  std::vector<std::string> outputs;
  // Null means every valuation is initial.
  ExprPtr init;

  const RegisterDecl* find_register(std::string_view name) const;
  const Wire* find_wire(std::string_view name) const;
  const Assignment* find_assignment(std::string_view target) const;
  bool declares(std::string_view name) const {
    return find_register(name) != nullptr || find_wire(name) != nullptr;
  }
  std::vector<std::string> register_names() const;
};

// A circuit that observes another one, referenced by name.
struct Monitor {
  std::string name;
  std::string base;
  // Own registers, wires, assignments and outputs. `body.width` is copied
  // from the base when the monitor is resolved.
  Circuit body;
};

bool structurally_equal(const Circuit& a, const Circuit& b);

}  // namespace uvleak
