#include "uvleak/bitblast.hpp"

#include <algorithm>

#include "uvleak/error.hpp"

namespace uvleak {

using Bits = std::vector<Lit>;

// --- BitBlaster -----------------------------------------------------------------

Bits BitBlaster::const_bits(uint64_t k, size_t n) const {
  Bits out(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = (i < 64 && ((k >> i) & 1)) ? CnfBuilder::kTrue : CnfBuilder::kFalse;
  return out;
}

SymValue BitBlaster::constant(Value v) const {
  if (!v.defined()) return bottom();
  return {CnfBuilder::kTrue, const_bits(v.bits() & width_mask(width_), width_)};
}

SymValue BitBlaster::bottom() const { return {CnfBuilder::kFalse, const_bits(0, width_)}; }

SymValue BitBlaster::fresh(unsigned reg_width, bool allow_bottom) {
  SymValue v;
  v.defined = allow_bottom ? cnf_.new_var() : CnfBuilder::kTrue;
  v.bits = const_bits(0, width_);
  for (unsigned i = 0; i < reg_width && i < width_; ++i) {
    v.bits[i] = cnf_.new_var();
    // Undefined values carry zero payload.
    if (allow_bottom) cnf_.add_clause({v.defined, -v.bits[i]});
  }
  return v;
}

SymValue BitBlaster::boolean(Lit defined, Lit b) const {
  SymValue v{defined, const_bits(0, width_)};
  v.bits[0] = b;
  return v;
}

Bits BitBlaster::add(const Bits& a, const Bits& b, Lit carry) {
  Bits out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    Lit x = cnf_.lxor(a[i], b[i]);
    out[i] = cnf_.lxor(x, carry);
    carry = cnf_.lor(cnf_.land(a[i], b[i]), cnf_.land(carry, x));
  }
  return out;
}

Bits BitBlaster::sub(const Bits& a, const Bits& b) {
  Bits nb(b.size());
  for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
  return add(a, nb, CnfBuilder::kTrue);
}

Bits BitBlaster::mul(const Bits& a, const Bits& b) {
  size_t n = a.size();
  Bits acc = const_bits(0, n);
  for (size_t i = 0; i < n; ++i) {
    Bits partial = const_bits(0, n);
    for (size_t j = 0; j + i < n; ++j) partial[j + i] = cnf_.land(a[j], b[i]);
    acc = add(acc, partial, CnfBuilder::kFalse);
  }
  return acc;
}

void BitBlaster::divmod(const Bits& a, const Bits& b, Bits& q, Bits& r) {
  size_t n = a.size();
  Bits rem = const_bits(0, n + 1);
  Bits bx = b;
  bx.push_back(CnfBuilder::kFalse);
  q = const_bits(0, n);
  for (size_t step = 0; step < n; ++step) {
    size_t i = n - 1 - step;
    // rem = (rem << 1) | a[i]
    for (size_t k = n; k > 0; --k) rem[k] = rem[k - 1];
    rem[0] = a[i];
    Lit ge = -ult(rem, bx);
    rem = mux_bits(ge, sub(rem, bx), rem);
    q[i] = ge;
  }
  r.assign(rem.begin(), rem.begin() + static_cast<long>(n));
}

Bits BitBlaster::shift(const Bits& a, const Bits& s, bool left) {
  size_t n = a.size();
  Bits cur = a;
  for (size_t j = 0; j < s.size() && (size_t{1} << j) < n; ++j) {
    size_t by = size_t{1} << j;
    Bits moved = const_bits(0, n);
    for (size_t i = 0; i < n; ++i) {
      if (left && i >= by) moved[i] = cur[i - by];
      if (!left && i + by < n) moved[i] = cur[i + by];
    }
    cur = mux_bits(s[j], moved, cur);
  }
  Lit too_far = -ult(s, const_bits(n, s.size()));
  return mux_bits(too_far, const_bits(0, n), cur);
}

Lit BitBlaster::ult(const Bits& a, const Bits& b) {
  Lit lt = CnfBuilder::kFalse;
  for (size_t i = 0; i < a.size(); ++i) {
    Lit a_lt_b = cnf_.land(-a[i], b[i]);
    Lit same = cnf_.liff(a[i], b[i]);
    lt = cnf_.lor(a_lt_b, cnf_.land(same, lt));
  }
  return lt;
}

Lit BitBlaster::eq(const Bits& a, const Bits& b) {
  Lit acc = CnfBuilder::kTrue;
  for (size_t i = 0; i < a.size(); ++i) acc = cnf_.land(acc, cnf_.liff(a[i], b[i]));
  return acc;
}

Bits BitBlaster::mux_bits(Lit sel, const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = cnf_.ite(sel, a[i], b[i]);
  return out;
}

Lit BitBlaster::nonzero(const Bits& bits) { return cnf_.lor_all(bits); }

Lit BitBlaster::equals_const(const Bits& bits, uint64_t k) {
  if (bits.size() < 64 && (k >> bits.size()) != 0) return CnfBuilder::kFalse;
  Lit acc = CnfBuilder::kTrue;
  for (size_t i = 0; i < bits.size(); ++i)
    acc = cnf_.land(acc, (i < 64 && ((k >> i) & 1)) ? bits[i] : -bits[i]);
  return acc;
}

Lit BitBlaster::truthy(const SymValue& v) { return cnf_.land(v.defined, nonzero(v.bits)); }

SymValue BitBlaster::truncate(const SymValue& v, unsigned reg_width) const {
  SymValue out = v;
  for (size_t i = reg_width; i < out.bits.size(); ++i) out.bits[i] = CnfBuilder::kFalse;
  return out;
}

SymValue BitBlaster::mux(Lit sel, const SymValue& a, const SymValue& b) {
  return {cnf_.ite(sel, a.defined, b.defined), mux_bits(sel, a.bits, b.bits)};
}

SymValue BitBlaster::unary(UnaryOp op, const SymValue& a) {
  switch (op) {
    case UnaryOp::Neg:
      return {a.defined, sub(const_bits(0, width_), a.bits)};
    case UnaryOp::BitNot: {
      Bits out(a.bits.size());
      for (size_t i = 0; i < out.size(); ++i) out[i] = -a.bits[i];
      return {a.defined, out};
    }
    case UnaryOp::LogicalNot:
      return boolean(a.defined, -nonzero(a.bits));
  }
  throw Error("unknown unary operator");
}

SymValue BitBlaster::binary(BinaryOp op, const SymValue& a, const SymValue& b) {
  Lit d = cnf_.land(a.defined, b.defined);
  const Bits& x = a.bits;
  const Bits& y = b.bits;
  switch (op) {
    case BinaryOp::Add: return {d, add(x, y, CnfBuilder::kFalse)};
    case BinaryOp::Sub: return {d, sub(x, y)};
    case BinaryOp::Mul: return {d, mul(x, y)};
    case BinaryOp::Div:
    case BinaryOp::Mod: {
      Bits q, r;
      divmod(x, y, q, r);
      return {cnf_.land(d, nonzero(y)), op == BinaryOp::Div ? q : r};
    }
    case BinaryOp::BitAnd:
    case BinaryOp::BitOr:
    case BinaryOp::BitXor: {
      Bits out(x.size());
      for (size_t i = 0; i < out.size(); ++i)
        out[i] = op == BinaryOp::BitAnd ? cnf_.land(x[i], y[i])
                 : op == BinaryOp::BitOr ? cnf_.lor(x[i], y[i])
                                         : cnf_.lxor(x[i], y[i]);
      return {d, out};
    }
    case BinaryOp::Shl: return {d, shift(x, y, true)};
    case BinaryOp::Shr: return {d, shift(x, y, false)};
    case BinaryOp::Eq: return boolean(d, eq(x, y));
    case BinaryOp::Ne: return boolean(d, -eq(x, y));
    case BinaryOp::Lt: return boolean(d, ult(x, y));
    case BinaryOp::Le: return boolean(d, -ult(y, x));
    case BinaryOp::Gt: return boolean(d, ult(y, x));
    case BinaryOp::Ge: return boolean(d, -ult(x, y));
    case BinaryOp::LogicalAnd: return boolean(d, cnf_.land(nonzero(x), nonzero(y)));
    case BinaryOp::LogicalOr: return boolean(d, cnf_.lor(nonzero(x), nonzero(y)));
  }
  throw Error("unknown binary operator");
}

SymValue BitBlaster::ite(const SymValue& c, const SymValue& t, const SymValue& e) {
  Lit sel = nonzero(c.bits);
  return {cnf_.land(c.defined, cnf_.ite(sel, t.defined, e.defined)), mux_bits(sel, t.bits, e.bits)};
}

SymValue BitBlaster::bit_select(const SymValue& v, const SymValue& hi, const SymValue& lo) {
  Lit d = cnf_.land_all(std::vector<Lit>{v.defined, hi.defined, lo.defined, -ult(hi.bits, lo.bits),
                                         ult(hi.bits, const_bits(width_, width_))});
  Bits shifted = shift(v.bits, lo.bits, false);
  Bits span = sub(hi.bits, lo.bits);
  Bits out(width_);
  for (size_t i = 0; i < width_; ++i) {
    // Keep bit i when i <= hi - lo.
    Lit keep = -ult(span, const_bits(i, width_));
    out[i] = cnf_.land(shifted[i], keep);
  }
  return {d, out};
}

SymValue BitBlaster::array_read(const std::vector<SymValue>& cells, const SymValue& index) {
  std::vector<Lit> def_terms;
  std::vector<std::vector<Lit>> bit_terms(width_);
  for (size_t k = 0; k < cells.size(); ++k) {
    Lit sel = equals_const(index.bits, k);
    if (sel == CnfBuilder::kFalse) continue;
    def_terms.push_back(cnf_.land(sel, cells[k].defined));
    for (size_t i = 0; i < width_; ++i) bit_terms[i].push_back(cnf_.land(sel, cells[k].bits[i]));
  }
  SymValue out;
  out.defined = cnf_.land(index.defined, cnf_.lor_all(def_terms));
  out.bits.resize(width_);
  for (size_t i = 0; i < width_; ++i) out.bits[i] = cnf_.lor_all(bit_terms[i]);
  return out;
}

// --- Unrolling ------------------------------------------------------------------

Unrolling::Unrolling(CnfBuilder& cnf, const Circuit& c, bool allow_bottom)
    : cnf_(cnf), circuit_(c), bb_(cnf, c.width), layout_(std::make_shared<Layout>(c.registers)) {
  for (size_t i = 0; i < circuit_.wires.size(); ++i) wire_index_.emplace(circuit_.wires[i].name, i);
  std::vector<SymValue> s0;
  s0.reserve(layout_->total_cells());
  for (const auto& slot : layout_->slots())
    for (uint32_t k = 0; k < slot.cells; ++k) s0.push_back(bb_.fresh(slot.width, allow_bottom));
  states_.push_back(std::move(s0));
  memos_.emplace_back();
  wire_vals_.emplace_back(circuit_.wires.size());
}

const std::vector<SymValue>& Unrolling::state(size_t cycle) {
  extend_to(cycle);
  return states_[cycle];
}

SymValue Unrolling::reg(size_t cycle, const std::string& name, uint32_t cell) {
  const Slot& s = layout_->slot(name);
  return state(cycle)[s.offset + cell];
}

void Unrolling::extend_to(size_t cycle) {
  while (states_.size() <= cycle) {
    size_t cur = states_.size() - 1;
    std::vector<SymValue> next = states_[cur];
    for (const auto& a : circuit_.assignments) {
      const Slot& slot = layout_->slot(a.target);
      SymValue v = bb_.truncate(eval(cur, a.value), slot.width);
      Lit en = a.enable ? bb_.truthy(eval(cur, a.enable)) : CnfBuilder::kTrue;
      if (!a.index) {
        next[slot.offset] = bb_.mux(en, v, states_[cur][slot.offset]);
        continue;
      }
      SymValue idx = eval(cur, a.index);
      Lit go = cnf_.land(en, idx.defined);
      for (uint32_t k = 0; k < slot.cells; ++k) {
        Lit we = cnf_.land(go, bb_.equals_const(idx.bits, k));
        next[slot.offset + k] = bb_.mux(we, v, states_[cur][slot.offset + k]);
      }
    }
    states_.push_back(std::move(next));
    memos_.emplace_back();
    wire_vals_.emplace_back(circuit_.wires.size());
  }
}

SymValue Unrolling::wire(size_t cycle, size_t index) {
  auto& slot = wire_vals_[cycle][index];
  if (!slot) slot = std::make_unique<SymValue>(eval(cycle, circuit_.wires[index].expr));
  return *slot;
}

SymValue Unrolling::eval(size_t cycle, const ExprPtr& e) {
  extend_to(cycle);
  return eval_in(cycle, e, memos_[cycle]);
}

SymValue Unrolling::eval_in(size_t cycle, const ExprPtr& e, Memo& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second.second;
  SymValue out;
  switch (e->kind()) {
    case ExprKind::Const:
      out = bb_.constant(e->value());
      break;
    case ExprKind::Ref: {
      if (const Slot* s = layout_->find(e->name())) {
        if (s->is_array) throw PreconditionError("array " + e->name() + " used as a scalar");
        out = states_[cycle][s->offset];
      } else if (auto it = wire_index_.find(e->name()); it != wire_index_.end()) {
        out = wire(cycle, it->second);
      } else {
        throw PreconditionError("unknown identifier " + e->name());
      }
      break;
    }
    case ExprKind::ArrayRead: {
      const Slot* s = layout_->find(e->name());
      if (!s || !s->is_array) throw PreconditionError(e->name() + " is not an array");
      SymValue idx = eval_in(cycle, e->operand(0), memo);
      std::vector<SymValue> cells(states_[cycle].begin() + static_cast<long>(s->offset),
                                  states_[cycle].begin() + static_cast<long>(s->offset + s->cells));
      out = bb_.array_read(cells, idx);
      break;
    }
    case ExprKind::Unary:
      out = bb_.unary(e->unary_op(), eval_in(cycle, e->operand(0), memo));
      break;
    case ExprKind::Binary: {
      SymValue a = eval_in(cycle, e->operand(0), memo);
      SymValue b = eval_in(cycle, e->operand(1), memo);
      out = bb_.binary(e->binary_op(), a, b);
      break;
    }
    case ExprKind::Ite: {
      SymValue c = eval_in(cycle, e->operand(0), memo);
      SymValue t = eval_in(cycle, e->operand(1), memo);
      SymValue f = eval_in(cycle, e->operand(2), memo);
      out = bb_.ite(c, t, f);
      break;
    }
    case ExprKind::BitSelect: {
      SymValue v = eval_in(cycle, e->operand(0), memo);
      SymValue h = eval_in(cycle, e->operand(1), memo);
      SymValue l = eval_in(cycle, e->operand(2), memo);
      out = bb_.bit_select(v, h, l);
      break;
    }
  }
  memo.emplace(e.get(), std::make_pair(e, out));
  return out;
}

Lit Unrolling::holds(size_t cycle, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return bb_.truthy(eval(cycle, f.expr()));
    case FormulaKind::Not:
      return -holds(cycle, *f.child());
    case FormulaKind::And: {
      std::vector<Lit> ls;
      for (const auto& c : f.children()) ls.push_back(holds(cycle, *c));
      return cnf_.land_all(ls);
    }
    case FormulaKind::Or: {
      std::vector<Lit> ls;
      for (const auto& c : f.children()) ls.push_back(holds(cycle, *c));
      return cnf_.lor_all(ls);
    }
    case FormulaKind::Implies:
      return cnf_.implies(holds(cycle, *f.child(0)), holds(cycle, *f.child(1)));
    case FormulaKind::Iff:
      return cnf_.liff(holds(cycle, *f.child(0)), holds(cycle, *f.child(1)));
    case FormulaKind::Next:
      return holds(cycle + 1, *f.child());
    case FormulaKind::BoundedFuture: {
      std::vector<Lit> ls;
      for (unsigned j = 0; j < f.bound(); ++j) ls.push_back(holds(cycle + j, *f.child()));
      return cnf_.land_all(ls);
    }
    case FormulaKind::Always:
      throw PreconditionError("G has no bounded encoding");
  }
  throw Error("unknown formula kind");
}

void Unrolling::pin(const Valuation& mu_in) {
  Valuation mu = mu_in.layout_ptr() == layout_ ? mu_in : mu_in.reshaped(layout_);
  for (size_t i = 0; i < mu.cells().size(); ++i) {
    const SymValue& s = states_[0][i];
    const Value& v = mu.cells()[i];
    if (!v.defined()) {
      cnf_.add_clause({-s.defined});
      continue;
    }
    cnf_.add_clause({s.defined});
    for (size_t b = 0; b < s.bits.size(); ++b) cnf_.add_clause({((v.bits() >> b) & 1) ? s.bits[b] : -s.bits[b]});
  }
}

Valuation Unrolling::decode(const SatOutcome& model, size_t cycle) {
  Valuation mu(layout_);
  const auto& st = state(cycle);
  for (const auto& slot : layout_->slots()) {
    for (uint32_t k = 0; k < slot.cells; ++k) {
      const SymValue& s = st[slot.offset + k];
      if (!model.value(s.defined)) {
        mu.cells()[slot.offset + k] = Value::bottom();
        continue;
      }
      uint64_t bits = 0;
      for (size_t b = 0; b < s.bits.size(); ++b)
        if (model.value(s.bits[b])) bits |= uint64_t{1} << b;
      mu.cells()[slot.offset + k] = Value::of(bits).truncated(slot.width);
    }
  }
  return mu;
}

}  // namespace uvleak
