#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uvleak/circuit.hpp"
#include "uvleak/trace.hpp"

namespace uvleak {

struct Slot {
  std::string name;
  unsigned width = 0;
  uint32_t cells = 1;
  bool is_array = false;
  // Position of the first cell in Valuation::cells().
  size_t offset = 0;
};

// Flat placement of a register set. Shared by every valuation of a circuit.
class Layout {
 public:
  explicit Layout(const std::vector<RegisterDecl>& regs);

  const std::vector<Slot>& slots() const { return slots_; }
  const Slot* find(std::string_view name) const;
  const Slot& slot(std::string_view name) const;
  size_t total_cells() const { return total_; }

 private:
  std::vector<Slot> slots_;
  std::unordered_map<std::string, size_t> index_;
  size_t total_ = 0;
};

// Total map from registers to values; arrays occupy one entry per cell.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::shared_ptr<const Layout> layout, Value fill = Value::bottom());

  const Layout& layout() const { return *layout_; }
  const std::shared_ptr<const Layout>& layout_ptr() const { return layout_; }

  Value get(std::string_view name) const;
  Value get(std::string_view name, uint32_t cell) const;
  std::vector<Value> array(std::string_view name) const;
  // Values are truncated to the register width.
  void set(std::string_view name, Value v);
  void set(std::string_view name, uint32_t cell, Value v);
  void set_array(std::string_view name, const std::vector<Value>& vs);

  const std::vector<Value>& cells() const { return cells_; }
  std::vector<Value>& cells() { return cells_; }

  // Same values under another layout; registers missing here become ⊥.
  Valuation reshaped(std::shared_ptr<const Layout> layout) const;

  // "pc=0 reg=3 m=[0,1,bot]" in layout order.
  std::string str() const;

  friend bool operator==(const Valuation& a, const Valuation& b) { return a.cells_ == b.cells_; }

 private:
  std::shared_ptr<const Layout> layout_;
  std::vector<Value> cells_;
};

class Simulator {
 public:
  // Throws PreconditionError when the circuit does not validate.
  explicit Simulator(Circuit c);

  const Circuit& circuit() const { return circuit_; }
  const std::shared_ptr<const Layout>& layout() const { return layout_; }

  // Reset values where declared, `fill` elsewhere.
  Valuation make_valuation(Value fill = Value::of(0)) const;

  // An expression compiled against this circuit for repeated evaluation.
  class Probe {
   public:
    Probe() = default;

   private:
    friend class Simulator;
    struct Node {
      ExprKind kind = ExprKind::Const;
      int op = 0;
      Value value;
      // Register cell offset, wire index or array slot index.
      size_t ref = 0;
      uint32_t cells = 0;
      bool wire = false;
      uint32_t kids[3] = {0, 0, 0};
    };
    std::vector<Node> nodes;
    uint32_t root = 0;
  };

  Probe compile(const ExprPtr& e) const;

  Value eval(const ExprPtr& e, const Valuation& mu) const;
  Value eval(const Probe& p, const Valuation& mu) const;
  // Defined and nonzero.
  bool satisfies(const Valuation& mu, const ExprPtr& phi) const;
  bool satisfies(const Valuation& mu, const Probe& phi) const;

  Valuation step(const Valuation& mu) const;
  Valuation run(const Valuation& mu, size_t n) const;
  // mu_0 .. mu_{n-1}
  std::vector<Valuation> states(const Valuation& mu, size_t n) const;

  // Output values in declaration order.
  std::vector<Value> outputs(const Valuation& mu) const;

  TraceDump trace_prefix(const Valuation& mu, size_t n) const;
  // Keeps cycles whose state satisfies phi; `label` names the role.
  TraceDump filtered_trace_prefix(const Valuation& mu, const ExprPtr& phi, size_t n,
                                  const std::string& label = "") const;

 private:
  struct Frame;
  uint32_t compile_into(const Expr& e, Probe& p) const;
  Value eval_node(const Probe& p, uint32_t i, Frame& f) const;
  Value wire_value(size_t w, Frame& f) const;
  TraceRow record(size_t cycle, const Valuation& mu, Frame& f) const;

  Circuit circuit_;
  std::shared_ptr<const Layout> layout_;
  std::unordered_map<std::string, size_t> wire_index_;
  std::vector<Probe> wires_;
  struct CompiledAssign {
    const Slot* slot;
    Probe value;
    Probe index;
    Probe enable;
    bool has_index = false;
    bool has_enable = false;
  };
  std::vector<CompiledAssign> assigns_;
  std::vector<Probe> outputs_;
};

// Free-function forms over a circuit.
Value eval_expr(const ExprPtr& e, const Valuation& mu, const Circuit& c);
Valuation step(const Circuit& c, const Valuation& mu);
Valuation run(const Circuit& c, const Valuation& mu, size_t n);
TraceDump trace_prefix(const Circuit& c, const Valuation& mu, size_t n);
TraceDump filtered_trace_prefix(const Circuit& c, const Valuation& mu, const ExprPtr& phi, size_t n);
bool satisfies(const Valuation& mu, const ExprPtr& phi, const Circuit& c);

}  // namespace uvleak
