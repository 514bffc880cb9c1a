#pragma once

#include <vector>

#include "uvleak/formula.hpp"
#include "uvleak/simulator.hpp"

namespace uvleak {

// A simulated run extended on demand, capped at `horizon` states
// (cycles 0..horizon-1).
class TraceCursor {
 public:
  TraceCursor(const Simulator& sim, const Valuation& mu, size_t horizon);

  size_t horizon() const { return horizon_; }
  // Throws HorizonExceeded past the horizon.
  const Valuation& state(size_t i);
  // G is checked up to the horizon only, unless `exact_always` asks for an
  // error instead of a bounded verdict.
  bool holds(size_t i, const Formula& f, bool exact_always = false);
  const std::vector<Valuation>& states() const { return states_; }

 private:
  const Simulator& sim_;
  size_t horizon_;
  std::vector<Valuation> states_;
};

bool holds_at(const Simulator& sim, const Valuation& mu, size_t i, const Formula& f, size_t horizon,
              bool exact_always = false);
bool holds_at(const Circuit& c, const Valuation& mu, size_t i, const Formula& f, size_t horizon,
              bool exact_always = false);

}  // namespace uvleak
