#include "uvleak/validity.hpp"

#include "uvleak/error.hpp"
#include "uvleak/temporal.hpp"

namespace uvleak {

namespace {

size_t horizon_for(const Formula& f) {
  if (contains_always(f)) throw PreconditionError("validity checks reject G");
  return *temporal_depth(f) + 1;
}

CexTrace make_cex(TraceCursor& cur) {
  CexTrace cex;
  for (size_t i = 0; i < cur.horizon(); ++i) cur.state(i);
  cex.initial = cur.states().front();
  cex.states = cur.states();
  return cex;
}

ValidityResult exhaustive(const Circuit& c, const Formula& f, const DomainBounds& bounds) {
  Simulator sim(c);
  size_t horizon = horizon_for(f);
  ValidityResult res;
  res.valid = true;
  enumerate_states(sim.layout(), bounds, {}, [&](const Valuation& mu) {
    TraceCursor cur(sim, mu, horizon);
    if (cur.holds(0, f)) return true;
    res.valid = false;
    res.cex = make_cex(cur);
    return false;
  });
  return res;
}

ValidityResult symbolic(const Circuit& c, const Formula& f, const DomainBounds& bounds,
                        const SymbolicOptions& opts) {
  Simulator sim(c);
  size_t horizon = horizon_for(f);
  CnfBuilder cnf;
  Unrolling u(cnf, c, bounds.include_bottom);
  constrain_to_bounds(u, bounds);
  if (opts.pinned) u.pin(*opts.pinned);
  Lit root = u.holds(0, f);
  cnf.add_clause({-root});
  SatOutcome out = solve_cnf(cnf, opts.solver);
  ValidityResult res;
  res.cnf_vars = cnf.num_vars();
  res.cnf_clauses = cnf.clauses().size();
  if (out.result == SatResult::Unknown) throw ResourceLimit("solver gave up on a validity query");
  if (out.result == SatResult::Unsat) {
    res.valid = true;
    return res;
  }
  TraceCursor cur(sim, u.decode(out, 0), horizon);
  if (cur.holds(0, f))
    throw Error("internal: decoded counterexample does not refute the formula");
  res.cex = make_cex(cur);
  return res;
}

}  // namespace

void constrain_to_bounds(Unrolling& u, const DomainBounds& bounds) {
  const Layout& layout = *u.layout();
  auto doms = cell_domains(layout, bounds);
  BitBlaster& bb = u.blaster();
  CnfBuilder& cnf = bb.cnf();
  const auto& s0 = u.state(0);
  for (const auto& slot : layout.slots()) {
    bool explicit_list = bounds.values.count(slot.name) > 0;
    bool capped = bounds.value_bits && *bounds.value_bits < slot.width;
    for (uint32_t k = 0; k < slot.cells; ++k) {
      const auto& dom = doms[slot.offset + k];
      bool fixed_cell = slot.is_array && bounds.memory_cells && k >= *bounds.memory_cells;
      if (!explicit_list && !capped && !fixed_cell) continue;
      const SymValue& v = s0[slot.offset + k];
      std::vector<Lit> options;
      for (const Value& d : dom) {
        if (!d.defined())
          options.push_back(-v.defined);
        else
          options.push_back(cnf.land(v.defined, bb.equals_const(v.bits, d.bits())));
      }
      cnf.add_clause({cnf.lor_all(options)});
    }
  }
}

ValidityResult check_validity(const Circuit& c, const Formula& f, Backend backend,
                              const DomainBounds& bounds, const SymbolicOptions& opts) {
  return backend == Backend::Exhaustive ? exhaustive(c, f, bounds) : symbolic(c, f, bounds, opts);
}

TraceDump state_dump(const Circuit& c, const std::vector<Valuation>& states) {
  TraceDump t;
  t.role = "full";
  Simulator sim(c);
  for (size_t i = 0; i < states.size(); ++i) {
    TraceRow row;
    row.cycle = i;
    const Valuation& mu = states[i];
    for (const auto& s : mu.layout().slots()) {
      if (!s.is_array) {
        row.values.emplace_back(s.name, mu.cells()[s.offset]);
        continue;
      }
      for (uint32_t k = 0; k < s.cells; ++k)
        row.values.emplace_back(s.name + "[" + std::to_string(k) + "]", mu.cells()[s.offset + k]);
    }
    auto outs = sim.outputs(mu);
    for (size_t o = 0; o < outs.size(); ++o)
      if (!c.find_register(c.outputs[o])) row.values.emplace_back(c.outputs[o], outs[o]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace uvleak
