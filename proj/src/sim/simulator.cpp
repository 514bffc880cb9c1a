#include "uvleak/simulator.hpp"

#include <sstream>

#include "uvleak/error.hpp"
#include "uvleak/validate.hpp"

namespace uvleak {

// --- Layout / Valuation --------------------------------------------------------

Layout::Layout(const std::vector<RegisterDecl>& regs) {
  for (const auto& r : regs) {
    Slot s;
    s.name = r.name;
    s.width = r.width;
    s.cells = r.cells();
    s.is_array = r.is_array();
    s.offset = total_;
    total_ += s.cells;
    index_.emplace(s.name, slots_.size());
    slots_.push_back(std::move(s));
  }
}

const Slot* Layout::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &slots_[it->second];
}

const Slot& Layout::slot(std::string_view name) const {
  const Slot* s = find(name);
  if (!s) throw PreconditionError("no register named " + std::string(name));
  return *s;
}

Valuation::Valuation(std::shared_ptr<const Layout> layout, Value fill)
    : layout_(std::move(layout)), cells_(layout_->total_cells(), fill) {
  if (fill.defined())
    for (const auto& s : layout_->slots())
      for (uint32_t k = 0; k < s.cells; ++k) cells_[s.offset + k] = fill.truncated(s.width);
}

Value Valuation::get(std::string_view name) const {
  const Slot& s = layout_->slot(name);
  if (s.is_array) throw PreconditionError(std::string(name) + " is an array");
  return cells_[s.offset];
}

Value Valuation::get(std::string_view name, uint32_t cell) const {
  const Slot& s = layout_->slot(name);
  if (cell >= s.cells) throw PreconditionError("cell index out of range for " + std::string(name));
  return cells_[s.offset + cell];
}

std::vector<Value> Valuation::array(std::string_view name) const {
  const Slot& s = layout_->slot(name);
  return {cells_.begin() + static_cast<long>(s.offset),
          cells_.begin() + static_cast<long>(s.offset + s.cells)};
}

void Valuation::set(std::string_view name, Value v) {
  const Slot& s = layout_->slot(name);
  if (s.is_array) throw PreconditionError(std::string(name) + " is an array");
  cells_[s.offset] = v.truncated(s.width);
}

void Valuation::set(std::string_view name, uint32_t cell, Value v) {
  const Slot& s = layout_->slot(name);
  if (cell >= s.cells) throw PreconditionError("cell index out of range for " + std::string(name));
  cells_[s.offset + cell] = v.truncated(s.width);
}

void Valuation::set_array(std::string_view name, const std::vector<Value>& vs) {
  const Slot& s = layout_->slot(name);
  if (vs.size() > s.cells) throw PreconditionError("too many cells for " + std::string(name));
  for (size_t k = 0; k < vs.size(); ++k) cells_[s.offset + k] = vs[k].truncated(s.width);
}

Valuation Valuation::reshaped(std::shared_ptr<const Layout> layout) const {
  Valuation out(layout);
  for (const auto& s : layout->slots()) {
    const Slot* mine = layout_ ? layout_->find(s.name) : nullptr;
    if (!mine) continue;
    uint32_t n = std::min(s.cells, mine->cells);
    for (uint32_t k = 0; k < n; ++k)
      out.cells_[s.offset + k] = cells_[mine->offset + k].truncated(s.width);
  }
  return out;
}

std::string Valuation::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : layout_->slots()) {
    if (!first) os << ' ';
    first = false;
    os << s.name << '=';
    if (!s.is_array) {
      os << cells_[s.offset].str();
      continue;
    }
    os << '[';
    for (uint32_t k = 0; k < s.cells; ++k) os << (k ? "," : "") << cells_[s.offset + k].str();
    os << ']';
  }
  return os.str();
}

// --- Simulator -------------------------------------------------------------------

struct Simulator::Frame {
  const Valuation& mu;
  std::vector<Value> wire_vals;
  std::vector<uint8_t> wire_done;
};

Simulator::Simulator(Circuit c) : circuit_(std::move(c)) {
  Diagnostics d = validate(circuit_);
  if (has_errors(d))
    throw PreconditionError("circuit " + circuit_.name + " does not validate:\n" + format_diagnostics(d));
  layout_ = std::make_shared<Layout>(circuit_.registers);
  for (size_t i = 0; i < circuit_.wires.size(); ++i) wire_index_.emplace(circuit_.wires[i].name, i);
  for (const auto& w : circuit_.wires) wires_.push_back(compile(w.expr));
  for (const auto& a : circuit_.assignments) {
    CompiledAssign ca;
    ca.slot = &layout_->slot(a.target);
    ca.value = compile(a.value);
    if (a.index) {
      ca.index = compile(a.index);
      ca.has_index = true;
    }
    if (a.enable) {
      ca.enable = compile(a.enable);
      ca.has_enable = true;
    }
    assigns_.push_back(std::move(ca));
  }
  for (const auto& o : circuit_.outputs) outputs_.push_back(compile(Expr::ref(o)));
}

Valuation Simulator::make_valuation(Value fill) const {
  Valuation mu(layout_, fill);
  for (const auto& r : circuit_.registers)
    if (r.reset)
      for (uint32_t k = 0; k < r.cells(); ++k) mu.set(r.name, k, Value::of(*r.reset));
  return mu;
}

Simulator::Probe Simulator::compile(const ExprPtr& e) const {
  if (!e) throw PreconditionError("missing expression");
  Probe p;
  p.root = compile_into(*e, p);
  return p;
}

uint32_t Simulator::compile_into(const Expr& e, Probe& p) const {
  Probe::Node n;
  n.kind = e.kind();
  switch (e.kind()) {
    case ExprKind::Const:
      n.value = e.value().truncated(circuit_.width);
      break;
    case ExprKind::Ref: {
      if (const Slot* s = layout_->find(e.name())) {
        if (s->is_array) throw PreconditionError("array " + e.name() + " used as a scalar");
        n.ref = s->offset;
      } else if (auto it = wire_index_.find(e.name()); it != wire_index_.end()) {
        n.ref = it->second;
        n.wire = true;
      } else {
        throw PreconditionError("unknown identifier " + e.name() + " in circuit " + circuit_.name);
      }
      break;
    }
    case ExprKind::ArrayRead: {
      const Slot* s = layout_->find(e.name());
      if (!s || !s->is_array) throw PreconditionError(e.name() + " is not an array");
      n.ref = s->offset;
      n.cells = s->cells;
      break;
    }
    case ExprKind::Unary:
      n.op = static_cast<int>(e.unary_op());
      break;
    case ExprKind::Binary:
      n.op = static_cast<int>(e.binary_op());
      break;
    default:
      break;
  }
  for (size_t i = 0; i < e.arity(); ++i) n.kids[i] = compile_into(*e.operand(i), p);
  p.nodes.push_back(n);
  return static_cast<uint32_t>(p.nodes.size() - 1);
}

Value Simulator::wire_value(size_t w, Frame& f) const {
  if (!f.wire_done[w]) {
    f.wire_vals[w] = eval_node(wires_[w], wires_[w].root, f);
    f.wire_done[w] = 1;
  }
  return f.wire_vals[w];
}

Value Simulator::eval_node(const Probe& p, uint32_t i, Frame& f) const {
  const Probe::Node& n = p.nodes[i];
  const unsigned w = circuit_.width;
  const uint64_t mask = width_mask(w);
  switch (n.kind) {
    case ExprKind::Const:
      return n.value;
    case ExprKind::Ref:
      return n.wire ? wire_value(n.ref, f) : f.mu.cells()[n.ref];
    case ExprKind::ArrayRead: {
      Value idx = eval_node(p, n.kids[0], f);
      if (!idx.defined() || idx.bits() >= n.cells) return Value::bottom();
      return f.mu.cells()[n.ref + idx.bits()];
    }
    case ExprKind::Ite: {
      Value c = eval_node(p, n.kids[0], f);
      if (!c.defined()) return Value::bottom();
      return eval_node(p, c.bits() != 0 ? n.kids[1] : n.kids[2], f);
    }
    case ExprKind::BitSelect: {
      Value v = eval_node(p, n.kids[0], f);
      Value hi = eval_node(p, n.kids[1], f);
      Value lo = eval_node(p, n.kids[2], f);
      if (!v.defined() || !hi.defined() || !lo.defined()) return Value::bottom();
      if (hi.bits() < lo.bits() || hi.bits() >= w) return Value::bottom();
      return Value::of((v.bits() >> lo.bits()) & width_mask(static_cast<unsigned>(hi.bits() - lo.bits() + 1)));
    }
    case ExprKind::Unary: {
      Value a = eval_node(p, n.kids[0], f);
      if (!a.defined()) return a;
      switch (static_cast<UnaryOp>(n.op)) {
        case UnaryOp::Neg: return Value::of((~a.bits() + 1) & mask);
        case UnaryOp::BitNot: return Value::of(~a.bits() & mask);
        case UnaryOp::LogicalNot: return Value::of(a.bits() == 0 ? 1 : 0);
      }
      return Value::bottom();
    }
    case ExprKind::Binary: {
      Value av = eval_node(p, n.kids[0], f);
      Value bv = eval_node(p, n.kids[1], f);
      if (!av.defined() || !bv.defined()) return Value::bottom();
      uint64_t a = av.bits(), b = bv.bits();
      switch (static_cast<BinaryOp>(n.op)) {
        case BinaryOp::Add: return Value::of((a + b) & mask);
        case BinaryOp::Sub: return Value::of((a - b) & mask);
        case BinaryOp::Mul: return Value::of((a * b) & mask);
        case BinaryOp::Div: return b == 0 ? Value::bottom() : Value::of(a / b);
        case BinaryOp::Mod: return b == 0 ? Value::bottom() : Value::of(a % b);
        case BinaryOp::BitAnd: return Value::of(a & b);
        case BinaryOp::BitOr: return Value::of(a | b);
        case BinaryOp::BitXor: return Value::of(a ^ b);
        case BinaryOp::Shl: return Value::of(b >= w ? 0 : (a << b) & mask);
        case BinaryOp::Shr: return Value::of(b >= w ? 0 : a >> b);
        case BinaryOp::Eq: return Value::of(a == b);
        case BinaryOp::Ne: return Value::of(a != b);
        case BinaryOp::Lt: return Value::of(a < b);
        case BinaryOp::Le: return Value::of(a <= b);
        case BinaryOp::Gt: return Value::of(a > b);
        case BinaryOp::Ge: return Value::of(a >= b);
        case BinaryOp::LogicalAnd: return Value::of(a != 0 && b != 0);
        case BinaryOp::LogicalOr: return Value::of(a != 0 || b != 0);
      }
      return Value::bottom();
    }
  }
  return Value::bottom();
}

namespace {

const Valuation& conform(const Valuation& mu, const std::shared_ptr<const Layout>& layout,
                         Valuation& scratch) {
  if (mu.layout_ptr() == layout) return mu;
  if (!mu.layout_ptr()) throw PreconditionError("empty valuation");
  scratch = mu.reshaped(layout);
  return scratch;
}

}  // namespace

Value Simulator::eval(const Probe& p, const Valuation& mu) const {
  Valuation scratch;
  Frame f{conform(mu, layout_, scratch), std::vector<Value>(wires_.size()),
          std::vector<uint8_t>(wires_.size(), 0)};
  return eval_node(p, p.root, f);
}

Value Simulator::eval(const ExprPtr& e, const Valuation& mu) const { return eval(compile(e), mu); }

bool Simulator::satisfies(const Valuation& mu, const ExprPtr& phi) const {
  return eval(phi, mu).truthy();
}

bool Simulator::satisfies(const Valuation& mu, const Probe& phi) const {
  return eval(phi, mu).truthy();
}

Valuation Simulator::step(const Valuation& in) const {
  Valuation scratch;
  const Valuation& mu = conform(in, layout_, scratch);
  Frame f{mu, std::vector<Value>(wires_.size()), std::vector<uint8_t>(wires_.size(), 0)};
  Valuation next = mu;
  for (const auto& a : assigns_) {
    if (a.has_enable && !eval_node(a.enable, a.enable.root, f).truthy()) continue;
    Value v = eval_node(a.value, a.value.root, f).truncated(a.slot->width);
    if (!a.has_index) {
      next.cells()[a.slot->offset] = v;
      continue;
    }
    Value idx = eval_node(a.index, a.index.root, f);
    if (!idx.defined() || idx.bits() >= a.slot->cells) continue;
    next.cells()[a.slot->offset + idx.bits()] = v;
  }
  return next;
}

Valuation Simulator::run(const Valuation& mu, size_t n) const {
  Valuation cur = mu.layout_ptr() == layout_ ? mu : mu.reshaped(layout_);
  for (size_t i = 0; i < n; ++i) cur = step(cur);
  return cur;
}

std::vector<Valuation> Simulator::states(const Valuation& mu, size_t n) const {
  std::vector<Valuation> out;
  if (n == 0) return out;
  out.reserve(n);
  out.push_back(mu.layout_ptr() == layout_ ? mu : mu.reshaped(layout_));
  while (out.size() < n) out.push_back(step(out.back()));
  return out;
}

std::vector<Value> Simulator::outputs(const Valuation& in) const {
  Valuation scratch;
  Frame f{conform(in, layout_, scratch), std::vector<Value>(wires_.size()),
          std::vector<uint8_t>(wires_.size(), 0)};
  std::vector<Value> out;
  out.reserve(outputs_.size());
  for (const auto& o : outputs_) out.push_back(eval_node(o, o.root, f));
  return out;
}

TraceRow Simulator::record(size_t cycle, const Valuation& mu, Frame& f) const {
  TraceRow row;
  row.cycle = cycle;
  (void)mu;
  for (size_t i = 0; i < outputs_.size(); ++i)
    row.values.emplace_back(circuit_.outputs[i], eval_node(outputs_[i], outputs_[i].root, f));
  return row;
}

TraceDump Simulator::trace_prefix(const Valuation& mu, size_t n) const {
  TraceDump t;
  auto ss = states(mu, n);
  for (size_t i = 0; i < ss.size(); ++i) {
    Frame f{ss[i], std::vector<Value>(wires_.size()), std::vector<uint8_t>(wires_.size(), 0)};
    t.rows.push_back(record(i, ss[i], f));
  }
  return t;
}

TraceDump Simulator::filtered_trace_prefix(const Valuation& mu, const ExprPtr& phi, size_t n,
                                           const std::string& label) const {
  TraceDump t;
  t.role = "filtered(" + (label.empty() ? std::string("phi") : label) + ")";
  Probe guard = compile(phi);
  auto ss = states(mu, n);
  for (size_t i = 0; i < ss.size(); ++i) {
    Frame f{ss[i], std::vector<Value>(wires_.size()), std::vector<uint8_t>(wires_.size(), 0)};
    if (!eval_node(guard, guard.root, f).truthy()) continue;
    t.rows.push_back(record(i, ss[i], f));
  }
  return t;
}

Value eval_expr(const ExprPtr& e, const Valuation& mu, const Circuit& c) {
  return Simulator(c).eval(e, mu);
}
Valuation step(const Circuit& c, const Valuation& mu) { return Simulator(c).step(mu); }
Valuation run(const Circuit& c, const Valuation& mu, size_t n) { return Simulator(c).run(mu, n); }
TraceDump trace_prefix(const Circuit& c, const Valuation& mu, size_t n) {
  return Simulator(c).trace_prefix(mu, n);
}
TraceDump filtered_trace_prefix(const Circuit& c, const Valuation& mu, const ExprPtr& phi, size_t n) {
  return Simulator(c).filtered_trace_prefix(mu, phi, n);
}
bool satisfies(const Valuation& mu, const ExprPtr& phi, const Circuit& c) {
  return Simulator(c).satisfies(mu, phi);
}

}  // namespace uvleak
