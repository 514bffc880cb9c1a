#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "uvleak/circuit.hpp"
#include "uvleak/formula.hpp"
#include "uvleak/sat.hpp"
#include "uvleak/simulator.hpp"

namespace uvleak {

// A symbolic circuit value: one literal for "defined" plus W payload bits,
// least significant first. Payload bits are meaningless when undefined.
struct SymValue {
  Lit defined = CnfBuilder::kFalse;
  std::vector<Lit> bits;
};

class BitBlaster {
 public:
  BitBlaster(CnfBuilder& cnf, unsigned width) : cnf_(cnf), width_(width) {}

  CnfBuilder& cnf() { return cnf_; }
  unsigned width() const { return width_; }

  SymValue constant(Value v) const;
  SymValue bottom() const;
  // Fresh variables for the low `reg_width` bits and for definedness.
  SymValue fresh(unsigned reg_width, bool allow_bottom);

  SymValue unary(UnaryOp op, const SymValue& a);
  SymValue binary(BinaryOp op, const SymValue& a, const SymValue& b);
  // Only the selected branch's definedness matters.
  SymValue ite(const SymValue& c, const SymValue& t, const SymValue& e);
  SymValue bit_select(const SymValue& v, const SymValue& hi, const SymValue& lo);
  SymValue array_read(const std::vector<SymValue>& cells, const SymValue& index);
  SymValue truncate(const SymValue& v, unsigned reg_width) const;
  // sel ? a : b, including definedness.
  SymValue mux(Lit sel, const SymValue& a, const SymValue& b);

  // Defined and nonzero.
  Lit truthy(const SymValue& v);
  Lit equals_const(const std::vector<Lit>& bits, uint64_t k);
  Lit nonzero(const std::vector<Lit>& bits);

 private:
  using Bits = std::vector<Lit>;
  Bits const_bits(uint64_t k, size_t n) const;
  Bits add(const Bits& a, const Bits& b, Lit carry);
  Bits sub(const Bits& a, const Bits& b);
  Bits mul(const Bits& a, const Bits& b);
  void divmod(const Bits& a, const Bits& b, Bits& q, Bits& r);
  Bits shift(const Bits& a, const Bits& s, bool left);
  Lit ult(const Bits& a, const Bits& b);
  Lit eq(const Bits& a, const Bits& b);
  Bits mux_bits(Lit sel, const Bits& a, const Bits& b);
  SymValue boolean(Lit defined, Lit b) const;

  CnfBuilder& cnf_;
  unsigned width_;
};

// Symbolic copies of a circuit's state for cycles 0..depth. Registers that
// are never assigned share one set of variables across cycles; wires are
// inlined per cycle.
class Unrolling {
 public:
  Unrolling(CnfBuilder& cnf, const Circuit& c, bool allow_bottom = true);

  const Circuit& circuit() const { return circuit_; }
  const std::shared_ptr<const Layout>& layout() const { return layout_; }
  BitBlaster& blaster() { return bb_; }
  size_t depth() const { return states_.size() - 1; }

  void extend_to(size_t cycle);
  const std::vector<SymValue>& state(size_t cycle);
  SymValue reg(size_t cycle, const std::string& name, uint32_t cell = 0);

  SymValue eval(size_t cycle, const ExprPtr& e);
  // Literal true iff f holds at `cycle`. Always is rejected.
  Lit holds(size_t cycle, const Formula& f);

  // Constrains the cycle-0 state to mu.
  void pin(const Valuation& mu);

  Valuation decode(const SatOutcome& model, size_t cycle = 0);

 private:
  using Memo = std::unordered_map<const Expr*, std::pair<ExprPtr, SymValue>>;
  SymValue eval_in(size_t cycle, const ExprPtr& e, Memo& memo);
  SymValue wire(size_t cycle, size_t index);

  CnfBuilder& cnf_;
  Circuit circuit_;
  BitBlaster bb_;
  std::shared_ptr<const Layout> layout_;
  std::unordered_map<std::string, size_t> wire_index_;
  std::vector<std::vector<SymValue>> states_;
  std::vector<Memo> memos_;
  std::vector<std::vector<std::unique_ptr<SymValue>>> wire_vals_;
};

}  // namespace uvleak
