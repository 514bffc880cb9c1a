#include "uvleak/expr.hpp"

#include <stdexcept>

namespace uvleak {

ExprPtr Expr::constant(Value v) {
  auto* e = new Expr();
  e->kind_ = ExprKind::Const;
  e->value_ = v;
  return ExprPtr(e);
}

ExprPtr Expr::ref(std::string name) {
  auto* e = new Expr();
  e->kind_ = ExprKind::Ref;
  e->name_ = std::move(name);
  return ExprPtr(e);
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  auto* e = new Expr();
  e->kind_ = ExprKind::Unary;
  e->unary_op_ = op;
  e->operands_ = {std::move(operand)};
  return ExprPtr(e);
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto* e = new Expr();
  e->kind_ = ExprKind::Binary;
  e->binary_op_ = op;
  e->operands_ = {std::move(lhs), std::move(rhs)};
  return ExprPtr(e);
}

ExprPtr Expr::ite(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
  auto* e = new Expr();
  e->kind_ = ExprKind::Ite;
  e->operands_ = {std::move(cond), std::move(then_e), std::move(else_e)};
  return ExprPtr(e);
}

ExprPtr Expr::bit_select(ExprPtr value, ExprPtr hi, ExprPtr lo) {
  auto* e = new Expr();
  e->kind_ = ExprKind::BitSelect;
  e->operands_ = {std::move(value), std::move(hi), std::move(lo)};
  return ExprPtr(e);
}

ExprPtr Expr::array_read(std::string array, ExprPtr index) {
  auto* e = new Expr();
  e->kind_ = ExprKind::ArrayRead;
  e->name_ = std::move(array);
  e->operands_ = {std::move(index)};
  return ExprPtr(e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.arity() != b.arity()) return false;
  switch (a.kind()) {
    case ExprKind::Const:
      if (!(a.value() == b.value())) return false;
      break;
    case ExprKind::Ref:
    case ExprKind::ArrayRead:
      if (a.name() != b.name()) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op() != b.unary_op()) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op() != b.binary_op()) return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < a.arity(); ++i)
    if (!structurally_equal(*a.operand(i), *b.operand(i))) return false;
  return true;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

namespace {

ExprPtr rebuild(const ExprPtr& e, std::vector<ExprPtr> ops, std::string name) {
  switch (e->kind()) {
    case ExprKind::Const:
      return e;
    case ExprKind::Ref:
      return Expr::ref(std::move(name));
    case ExprKind::Unary:
      return Expr::unary(e->unary_op(), ops[0]);
    case ExprKind::Binary:
      return Expr::binary(e->binary_op(), ops[0], ops[1]);
    case ExprKind::Ite:
      return Expr::ite(ops[0], ops[1], ops[2]);
    case ExprKind::BitSelect:
      return Expr::bit_select(ops[0], ops[1], ops[2]);
    case ExprKind::ArrayRead:
      return Expr::array_read(std::move(name), ops[0]);
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace

ExprPtr rename_identifiers(const ExprPtr& e,
                           const std::function<std::string(const std::string&)>& rename) {
  if (!e) return e;
  std::vector<ExprPtr> ops;
  for (const auto& op : e->operands()) ops.push_back(rename_identifiers(op, rename));
  std::string name = e->name().empty() ? std::string() : rename(e->name());
  return rebuild(e, std::move(ops), std::move(name));
}

ExprPtr substitute(const ExprPtr& e,
                   const std::function<ExprPtr(const std::string&)>& subst) {
  if (!e) return e;
  if (e->kind() == ExprKind::Ref) {
    if (auto r = subst(e->name())) return r;
    return e;
  }
  if (e->kind() == ExprKind::Const) return e;
  std::vector<ExprPtr> ops;
  for (const auto& op : e->operands()) ops.push_back(substitute(op, subst));
  return rebuild(e, std::move(ops), e->name());
}

void collect_identifiers(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == ExprKind::Ref || e.kind() == ExprKind::ArrayRead) out.insert(e.name());
  for (const auto& op : e.operands()) collect_identifiers(*op, out);
}

}  // namespace uvleak
