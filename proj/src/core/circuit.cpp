#include "uvleak/circuit.hpp"

namespace uvleak {

const RegisterDecl* Circuit::find_register(std::string_view name) const {
  for (const auto& r : registers)
    if (r.name == name) return &r;
  return nullptr;
}

const Wire* Circuit::find_wire(std::string_view name) const {
  for (const auto& w : wires)
    if (w.name == name) return &w;
  return nullptr;
}

const Assignment* Circuit::find_assignment(std::string_view target) const {
  for (const auto& a : assignments)
    if (a.target == target) return &a;
  return nullptr;
}

std::vector<std::string> Circuit::register_names() const {
  std::vector<std::string> out;
  out.reserve(registers.size());
  for (const auto& r : registers) out.push_back(r.name);
  return out;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
  if (a.name != b.name || a.width != b.width || a.outputs != b.outputs) return false;
  if (a.registers.size() != b.registers.size() || a.wires.size() != b.wires.size() ||
      a.assignments.size() != b.assignments.size())
    return false;
  for (size_t i = 0; i < a.registers.size(); ++i) {
    const auto& x = a.registers[i];
    const auto& y = b.registers[i];
    if (x.name != y.name || x.width != y.width || x.length != y.length || x.reset != y.reset)
      return false;
  }
  for (size_t i = 0; i < a.wires.size(); ++i) {
    if (a.wires[i].name != b.wires[i].name ||
        !structurally_equal(a.wires[i].expr, b.wires[i].expr))
      return false;
  }
  for (size_t i = 0; i < a.assignments.size(); ++i) {
    const auto& x = a.assignments[i];
    const auto& y = b.assignments[i];
    if (x.target != y.target || !structurally_equal(x.index, y.index) ||
        !structurally_equal(x.value, y.value) || !structurally_equal(x.enable, y.enable))
      return false;
  }
  return structurally_equal(a.init, b.init);
}

}  // namespace uvleak
