#include "uvleak/temporal.hpp"

#include "uvleak/error.hpp"

namespace uvleak {

TraceCursor::TraceCursor(const Simulator& sim, const Valuation& mu, size_t horizon)
    : sim_(sim), horizon_(horizon) {
  if (horizon_ > 0) states_.push_back(mu.layout_ptr() == sim.layout() ? mu : mu.reshaped(sim.layout()));
}

const Valuation& TraceCursor::state(size_t i) {
  if (i >= horizon_)
    throw HorizonExceeded("formula needs cycle " + std::to_string(i) + " but the horizon is " +
                          std::to_string(horizon_));
  while (states_.size() <= i) states_.push_back(sim_.step(states_.back()));
  return states_[i];
}

bool TraceCursor::holds(size_t i, const Formula& f, bool exact_always) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return sim_.satisfies(state(i), f.expr());
    case FormulaKind::Not:
      return !holds(i, *f.child(), exact_always);
    case FormulaKind::And:
      for (const auto& c : f.children())
        if (!holds(i, *c, exact_always)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children())
        if (holds(i, *c, exact_always)) return true;
      return false;
    case FormulaKind::Implies:
      return !holds(i, *f.child(0), exact_always) || holds(i, *f.child(1), exact_always);
    case FormulaKind::Iff:
      return holds(i, *f.child(0), exact_always) == holds(i, *f.child(1), exact_always);
    case FormulaKind::Next:
      return holds(i + 1, *f.child(), exact_always);
    case FormulaKind::BoundedFuture:
      for (unsigned j = 0; j < f.bound(); ++j)
        if (!holds(i + j, *f.child(), exact_always)) return false;
      return true;
    case FormulaKind::Always:
      if (exact_always) throw HorizonExceeded("G cannot be decided on a finite prefix");
      for (size_t j = i; j < horizon_; ++j)
        if (!holds(j, *f.child(), exact_always)) return false;
      return true;
  }
  throw Error("unknown formula kind");
}

bool holds_at(const Simulator& sim, const Valuation& mu, size_t i, const Formula& f, size_t horizon,
              bool exact_always) {
  TraceCursor cur(sim, mu, horizon);
  return cur.holds(i, f, exact_always);
}

bool holds_at(const Circuit& c, const Valuation& mu, size_t i, const Formula& f, size_t horizon,
              bool exact_always) {
  Simulator sim(c);
  return holds_at(sim, mu, i, f, horizon, exact_always);
}

}  // namespace uvleak
