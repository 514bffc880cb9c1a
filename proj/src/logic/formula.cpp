#include "uvleak/formula.hpp"

#include <algorithm>
#include <stdexcept>

#include "uvleak/error.hpp"

namespace uvleak {

FormulaPtr Formula::atom(ExprPtr e) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Atom;
  f->expr_ = std::move(e);
  return FormulaPtr(f);
}

FormulaPtr Formula::negation(FormulaPtr g) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Not;
  f->children_ = {std::move(g)};
  return FormulaPtr(f);
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::And;
  f->children_ = std::move(fs);
  return FormulaPtr(f);
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Or;
  f->children_ = std::move(fs);
  return FormulaPtr(f);
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Implies;
  f->children_ = {std::move(a), std::move(b)};
  return FormulaPtr(f);
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Iff;
  f->children_ = {std::move(a), std::move(b)};
  return FormulaPtr(f);
}

FormulaPtr Formula::next(FormulaPtr g) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Next;
  f->children_ = {std::move(g)};
  return FormulaPtr(f);
}

FormulaPtr Formula::bounded_future(unsigned k, FormulaPtr g) {
  if (k < 1) throw PreconditionError("F<=k needs k >= 1");
  auto* f = new Formula();
  f->kind_ = FormulaKind::BoundedFuture;
  f->bound_ = k;
  f->children_ = {std::move(g)};
  return FormulaPtr(f);
}

FormulaPtr Formula::always(FormulaPtr g) {
  auto* f = new Formula();
  f->kind_ = FormulaKind::Always;
  f->children_ = {std::move(g)};
  return FormulaPtr(f);
}

bool contains_always(const Formula& f) {
  if (f.kind() == FormulaKind::Always) return true;
  return std::any_of(f.children().begin(), f.children().end(),
                     [](const FormulaPtr& c) { return contains_always(*c); });
}

std::optional<unsigned> temporal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return 0u;
    case FormulaKind::Always:
      return std::nullopt;
    case FormulaKind::Next: {
      auto d = temporal_depth(*f.child());
      if (!d) return d;
      return *d + 1;
    }
    case FormulaKind::BoundedFuture: {
      auto d = temporal_depth(*f.child());
      if (!d) return d;
      return *d + f.bound() - 1;
    }
    default: {
      unsigned m = 0;
      for (const auto& c : f.children()) {
        auto d = temporal_depth(*c);
        if (!d) return d;
        m = std::max(m, *d);
      }
      return m;
    }
  }
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind() || a.bound() != b.bound() ||
      a.children().size() != b.children().size())
    return false;
  if (a.kind() == FormulaKind::Atom) return structurally_equal(a.expr(), b.expr());
  for (size_t i = 0; i < a.children().size(); ++i)
    if (!structurally_equal(*a.children()[i], *b.children()[i])) return false;
  return true;
}

FormulaPtr rename_identifiers(const FormulaPtr& f,
                              const std::function<std::string(const std::string&)>& rename) {
  std::vector<FormulaPtr> kids;
  for (const auto& c : f->children()) kids.push_back(rename_identifiers(c, rename));
  switch (f->kind()) {
    case FormulaKind::Atom:
      return Formula::atom(rename_identifiers(f->expr(), rename));
    case FormulaKind::Not:
      return Formula::negation(kids[0]);
    case FormulaKind::And:
      return Formula::conj(std::move(kids));
    case FormulaKind::Or:
      return Formula::disj(std::move(kids));
    case FormulaKind::Implies:
      return Formula::implies(kids[0], kids[1]);
    case FormulaKind::Iff:
      return Formula::iff(kids[0], kids[1]);
    case FormulaKind::Next:
      return Formula::next(kids[0]);
    case FormulaKind::BoundedFuture:
      return Formula::bounded_future(f->bound(), kids[0]);
    case FormulaKind::Always:
      return Formula::always(kids[0]);
  }
  throw std::logic_error("unknown formula kind");
}

}  // namespace uvleak
