#include "uvleak/domain.hpp"

#include <algorithm>

#include "uvleak/error.hpp"

namespace uvleak {

namespace {

void collect_pins(const ExprPtr& e, std::map<std::string, Value>& pins) {
  if (!e || e->kind() != ExprKind::Binary) return;
  if (e->binary_op() == BinaryOp::LogicalAnd) {
    collect_pins(e->operand(0), pins);
    collect_pins(e->operand(1), pins);
    return;
  }
  if (e->binary_op() != BinaryOp::Eq) return;
  const Expr* a = e->operand(0).get();
  const Expr* b = e->operand(1).get();
  if (a->kind() == ExprKind::Const) std::swap(a, b);
  if (a->kind() == ExprKind::Ref && b->kind() == ExprKind::Const && b->value().defined())
    pins.emplace(a->name(), b->value());
}

}  // namespace

std::map<std::string, Value> init_pins(const ExprPtr& init) {
  std::map<std::string, Value> pins;
  collect_pins(init, pins);
  return pins;
}

std::vector<std::vector<Value>> cell_domains(const Layout& layout, const DomainBounds& bounds,
                                             const std::map<std::string, Value>& pins) {
  std::vector<std::vector<Value>> out(layout.total_cells());
  for (const auto& s : layout.slots()) {
    std::vector<Value> dom;
    if (auto it = bounds.values.find(s.name); it != bounds.values.end()) {
      for (Value v : it->second) {
        v = v.truncated(s.width);
        if (std::find(dom.begin(), dom.end(), v) == dom.end()) dom.push_back(v);
      }
    } else {
      unsigned bits = std::min(s.width, bounds.value_bits.value_or(s.width));
      uint64_t n = uint64_t{1} << bits;
      if (n > bounds.max_states) throw DomainTooLarge("register " + s.name + " alone has " + std::to_string(n) + " values");
      for (uint64_t v = 0; v < n; ++v) dom.push_back(Value::of(v));
      if (bounds.include_bottom) dom.push_back(Value::bottom());
    }
    if (!s.is_array) {
      if (auto p = pins.find(s.name); p != pins.end()) dom = {p->second.truncated(s.width)};
      out[s.offset] = std::move(dom);
      continue;
    }
    uint32_t varying = std::min(s.cells, bounds.memory_cells.value_or(s.cells));
    for (uint32_t k = 0; k < s.cells; ++k)
      out[s.offset + k] = k < varying ? dom : std::vector<Value>{bounds.memory_fill.truncated(s.width)};
  }
  return out;
}

uint64_t count_states(const Layout& layout, const DomainBounds& bounds,
                      const std::map<std::string, Value>& pins) {
  uint64_t total = 1;
  for (const auto& d : cell_domains(layout, bounds, pins)) {
    if (d.empty()) return 0;
    if (total > bounds.max_states / d.size())
      throw DomainTooLarge("state space exceeds " + std::to_string(bounds.max_states) + " valuations");
    total *= d.size();
  }
  if (total > bounds.max_states)
    throw DomainTooLarge("state space exceeds " + std::to_string(bounds.max_states) + " valuations");
  return total;
}

void enumerate_states(const std::shared_ptr<const Layout>& layout, const DomainBounds& bounds,
                      const std::map<std::string, Value>& pins,
                      const std::function<bool(const Valuation&)>& visit) {
  if (count_states(*layout, bounds, pins) == 0) return;
  auto doms = cell_domains(*layout, bounds, pins);
  std::vector<size_t> pos(doms.size(), 0);
  Valuation mu(layout);
  for (size_t i = 0; i < doms.size(); ++i) mu.cells()[i] = doms[i][0];
  for (;;) {
    if (!visit(mu)) return;
    // Odometer with the last cell turning fastest.
    size_t i = doms.size();
    while (i > 0) {
      --i;
      if (++pos[i] < doms[i].size()) {
        mu.cells()[i] = doms[i][pos[i]];
        break;
      }
      pos[i] = 0;
      mu.cells()[i] = doms[i][0];
      if (i == 0) return;
    }
    if (doms.empty()) return;
  }
}

}  // namespace uvleak
