#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "uvleak/value.hpp"

namespace uvleak {

enum class UnaryOp { Neg, BitNot, LogicalNot };

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  BitAnd,
  BitOr,
  BitXor,
  Shl,
  Shr,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  LogicalAnd,
  LogicalOr,
};

enum class ExprKind { Const, Ref, Unary, Binary, Ite, BitSelect, ArrayRead };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Children are shared, so rewriting builds new
// spines and reuses untouched subtrees.
class Expr {
 public:
  static ExprPtr constant(Value v);
  static ExprPtr constant(uint64_t n) { return constant(Value::of(n)); }
  static ExprPtr ref(std::string name);
  static ExprPtr unary(UnaryOp op, ExprPtr e);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr ite(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
  // value[hi:lo]
  static ExprPtr bit_select(ExprPtr value, ExprPtr hi, ExprPtr lo);
  static ExprPtr array_read(std::string array, ExprPtr index);

  ExprKind kind() const { return kind_; }
  const Value& value() const { return value_; }
  const std::string& name() const { return name_; }
  UnaryOp unary_op() const { return unary_op_; }
  BinaryOp binary_op() const { return binary_op_; }
  size_t arity() const { return operands_.size(); }
  const ExprPtr& operand(size_t i) const { return operands_.at(i); }
  const std::vector<ExprPtr>& operands() const { return operands_; }

 private:
  Expr() = default;

  ExprKind kind_ = ExprKind::Const;
  Value value_;
  std::string name_;
  UnaryOp unary_op_ = UnaryOp::Neg;
  BinaryOp binary_op_ = BinaryOp::Add;
  std::vector<ExprPtr> operands_;
};

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Rewrites every identifier (Ref and ArrayRead target) through `rename`.
ExprPtr rename_identifiers(const ExprPtr& e,
                           const std::function<std::string(const std::string&)>& rename);

// Replaces every Ref whose name `subst` maps to a non-null expression.
ExprPtr substitute(const ExprPtr& e,
                   const std::function<ExprPtr(const std::string&)>& subst);

// Names referenced directly by `e` (Refs and array targets), not through wires.
void collect_identifiers(const Expr& e, std::set<std::string>& out);

// Convenience builders used throughout the transformations.
namespace build {
inline ExprPtr num(uint64_t n) { return Expr::constant(n); }
inline ExprPtr id(std::string name) { return Expr::ref(std::move(name)); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) {
  return Expr::binary(BinaryOp::Eq, std::move(a), std::move(b));
}
inline ExprPtr land(ExprPtr a, ExprPtr b) {
  return Expr::binary(BinaryOp::LogicalAnd, std::move(a), std::move(b));
}
inline ExprPtr lor(ExprPtr a, ExprPtr b) {
  return Expr::binary(BinaryOp::LogicalOr, std::move(a), std::move(b));
}
inline ExprPtr lnot(ExprPtr a) { return Expr::unary(UnaryOp::LogicalNot, std::move(a)); }
inline ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e) {
  return Expr::ite(std::move(c), std::move(t), std::move(e));
}
}  // namespace build

}  // namespace uvleak
