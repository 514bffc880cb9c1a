#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "uvleak/expr.hpp"

namespace uvleak {

enum class FormulaKind { Atom, Not, And, Or, Implies, Iff, Next, BoundedFuture, Always };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  static FormulaPtr atom(ExprPtr e);
  static FormulaPtr truth() { return conj({}); }
  static FormulaPtr negation(FormulaPtr f);
  // An empty conjunction is true, an empty disjunction false.
  static FormulaPtr conj(std::vector<FormulaPtr> fs);
  static FormulaPtr disj(std::vector<FormulaPtr> fs);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
  static FormulaPtr next(FormulaPtr f);
  // Holds at i when f holds at every j in [i, i+k). k must be at least 1.
  static FormulaPtr bounded_future(unsigned k, FormulaPtr f);
  static FormulaPtr always(FormulaPtr f);

  FormulaKind kind() const { return kind_; }
  const ExprPtr& expr() const { return expr_; }
  unsigned bound() const { return bound_; }
  const std::vector<FormulaPtr>& children() const { return children_; }
  const FormulaPtr& child(size_t i = 0) const { return children_.at(i); }

 private:
  Formula() = default;

  FormulaKind kind_ = FormulaKind::Atom;
  ExprPtr expr_;
  unsigned bound_ = 0;
  std::vector<FormulaPtr> children_;
};

bool contains_always(const Formula& f);

// Number of transitions past the evaluation point that f inspects.
// Always has no finite depth and yields nullopt.
std::optional<unsigned> temporal_depth(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);

// Copy-tags every identifier in f.
FormulaPtr rename_identifiers(const FormulaPtr& f,
                              const std::function<std::string(const std::string&)>& rename);

}  // namespace uvleak
