#include <algorithm>
#include <chrono>

#include "uvleak/engine.hpp"
#include "uvleak/error.hpp"
#include "uvleak/temporal.hpp"
#include "uvleak/textio.hpp"

namespace uvleak {

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::AutoRegEq: return "reg";
    case Provenance::AutoWireEq: return "wire";
    case Provenance::AutoAttackerEq: return "attacker";
    case Provenance::AutoRetSync: return "retire-sync";
    case Provenance::User: return "user";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::NotProved: return "NotProved";
    case Verdict::CounterexampleFound: return "CounterexampleFound";
  }
  return "?";
}

std::string candidate_text(const CandidateInvariant& c) { return print_formula(*c.formula); }

ExprPtr register_equal(const RegisterDecl& r, unsigned a, unsigned b) {
  std::string x = tag_name(r.name, a), y = tag_name(r.name, b);
  if (!r.is_array()) return build::eq(build::id(x), build::id(y));
  ExprPtr all;
  for (uint32_t k = 0; k < r.cells(); ++k) {
    ExprPtr e = build::eq(Expr::array_read(x, build::num(k)), Expr::array_read(y, build::num(k)));
    all = all ? build::land(all, e) : e;
  }
  return all;
}

std::set<std::string> arch_registers(const Circuit& impl, const std::set<std::string>& uarch) {
  std::set<std::string> out;
  for (const auto& r : impl.registers)
    if (!uarch.count(r.name)) out.insert(r.name);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FormulaPtr atom(ExprPtr e) { return Formula::atom(std::move(e)); }

FormulaPtr output_equal(const std::string& o, unsigned a, unsigned b) {
  return atom(build::eq(build::id(tag_name(o, a)), build::id(tag_name(o, b))));
}

FormulaPtr outputs_equal(const std::vector<std::string>& outs, unsigned a, unsigned b) {
  std::vector<FormulaPtr> fs;
  for (const auto& o : outs) fs.push_back(output_equal(o, a, b));
  return Formula::conj(std::move(fs));
}

size_t depth_of(const Formula& f) {
  auto d = temporal_depth(f);
  if (!d) throw PreconditionError("candidate invariants and assumptions must not use G");
  return *d;
}

struct Pool {
  std::vector<CandidateInvariant> items;

  void add(FormulaPtr f, Provenance p, std::string label) {
    for (const auto& c : items)
      if (structurally_equal(*c.formula, *f)) return;
    items.push_back({std::move(f), p, std::move(label)});
  }
};

void add_user(Pool& pool, const std::vector<std::string>& texts, const Circuit& over) {
  for (size_t i = 0; i < texts.size(); ++i)
    pool.add(parse_formula(texts[i], over), Provenance::User, "user." + std::to_string(i + 1));
}

void check_combinatorial(const Monitor& m, const Circuit& c) {
  MonitorCheck chk = check_monitor(m, c);
  if (!chk.is_combinatorial)
    throw PreconditionError(m.name + " is not a combinatorial monitor for " + c.name + ":\n" +
                            format_diagnostics(chk.diagnostics));
}

void check_problem(const VerificationProblem& p) {
  if (p.lookahead < 1) throw PreconditionError("lookahead b must be at least 1");
  if (!p.retire) throw PreconditionError("missing retirement predicate");
  check_combinatorial(p.contract, p.impl);
  check_combinatorial(p.attacker, p.impl);
  for (const auto& r : p.uarch)
    if (!p.impl.find_register(r))
      throw PreconditionError("uarch register " + r + " is not declared in " + p.impl.name);
  std::set<std::string> ids;
  collect_identifiers(*p.retire, ids);
  for (const auto& id : ids)
    if (!p.impl.declares(id)) throw PreconditionError("retirement predicate uses undeclared " + id);
}

VerificationReport finish(const Circuit& c, const LearnResult& lr, const FormulaPtr& goal,
                          const VerificationProblem& p, size_t ncand, Clock::time_point t0) {
  VerificationReport rep;
  rep.learned = lr.learned;
  rep.dropped = lr.dropped;
  rep.stats = lr.stats;
  rep.lookahead = p.lookahead;
  rep.candidates = ncand;
  std::vector<FormulaPtr> li;
  for (const auto& x : lr.learned) li.push_back(x.formula);
  FormulaPtr final_check = Formula::implies(Formula::conj(li), goal);
  ++rep.stats.solver_queries;
  try {
    DomainBounds all;
    all.include_bottom = p.bottom_states;
    ValidityResult vr = check_validity(c, *final_check, Backend::Symbolic, all, {std::nullopt, p.solver});
    if (vr.valid) {
      rep.verdict = Verdict::Satisfied;
    } else {
      rep.verdict = Verdict::NotProved;
      rep.reason = "learned invariants do not imply attacker equivalence";
      rep.cex = state_dump(c, {vr.cex->initial});
    }
  } catch (const ResourceLimit& e) {
    rep.verdict = Verdict::NotProved;
    rep.resource_limited = true;
    rep.reason = std::string("resource limit: ") + e.what();
  }
  rep.seconds = since(t0);
  return rep;
}

VerificationReport limited(const VerificationProblem& p, const ResourceLimit& e, size_t ncand,
                           Clock::time_point t0) {
  VerificationReport rep;
  rep.verdict = Verdict::NotProved;
  rep.resource_limited = true;
  rep.reason = std::string("resource limit: ") + e.what();
  rep.lookahead = p.lookahead;
  rep.candidates = ncand;
  rep.seconds = since(t0);
  return rep;
}

}  // namespace

LearnResult learn_inv(const Circuit& c, const FormulaPtr& initial, const FormulaPtr& assumption,
                      unsigned b, std::vector<CandidateInvariant> ci, const SolverOptions& solver,
                      bool bottom_states) {
  if (b < 1) throw PreconditionError("lookahead b must be at least 1");
  Simulator sim(c);
  FormulaPtr assume = Formula::bounded_future(b, assumption);
  size_t horizon = std::max(depth_of(*initial), depth_of(*assume));
  for (const auto& x : ci) horizon = std::max(horizon, depth_of(*x.formula) + 1);
  horizon += 2;

  LearnResult res;
  std::vector<size_t> active(ci.size());
  for (size_t i = 0; i < ci.size(); ++i) active[i] = i;

  // One phase: premise(active) -> /\ active at `at`.
  auto phase = [&](bool inductive) {
    size_t at = inductive ? 1 : 0;
    unsigned& iters = inductive ? res.stats.iterations_inductive : res.stats.iterations_base;
    CnfBuilder cnf;
    Unrolling u(cnf, c, bottom_states);
    Lit start = inductive ? CnfBuilder::kTrue : u.holds(0, *initial);
    Lit assume_lit = u.holds(0, *assume);
    std::vector<Lit> now(ci.size()), later(ci.size());
    for (size_t i = 0; i < ci.size(); ++i) {
      now[i] = u.holds(0, *ci[i].formula);
      if (inductive) later[i] = u.holds(1, *ci[i].formula);
    }
    while (true) {
      ++iters;
      ++res.stats.solver_queries;
      std::vector<Lit> pre{start, assume_lit}, post;
      for (size_t i : active) {
        if (inductive) pre.push_back(now[i]);
        post.push_back(inductive ? later[i] : now[i]);
      }
      Lit premise = cnf.land_all(pre);
      Lit goal = cnf.land_all(post);
      SatOutcome out = solve_cnf(cnf, solver, std::vector<Lit>{premise, -goal});
      if (out.result == SatResult::Unknown) throw ResourceLimit("solver gave up during LearnInv");
      if (out.result == SatResult::Unsat) return;

      TraceCursor cur(sim, u.decode(out, 0), horizon);
      bool pre_ok = cur.holds(0, *assume) && (inductive || cur.holds(0, *initial));
      for (size_t i : active)
        if (inductive && !cur.holds(0, *ci[i].formula)) pre_ok = false;
      if (!pre_ok) throw Error("internal: LearnInv counterexample violates its premise");
      std::vector<size_t> keep;
      for (size_t i : active) {
        if (cur.holds(at, *ci[i].formula))
          keep.push_back(i);
        else
          res.dropped.push_back({ci[i], inductive, iters});
      }
      if (keep.size() == active.size())
        throw Error("internal: LearnInv counterexample refutes no candidate");
      active = std::move(keep);
    }
  };

  phase(false);
  if (!active.empty()) phase(true);
  for (size_t i : active) res.learned.push_back(ci[i]);
  return res;
}

PairedCircuit verification_circuit(const VerificationProblem& p) {
  Circuit composed = compose_all({&p.contract, &p.attacker}, p.impl);
  return stuttering_product(composed, p.retire);
}

std::vector<CandidateInvariant> generate_candidates(const VerificationProblem& p,
                                                    const Circuit& paired) {
  Pool pool;
  if (p.auto_candidates) {
    for (const auto& r : p.impl.registers) pool.add(atom(register_equal(r, 1, 2)), Provenance::AutoRegEq, r.name);
    for (const auto& w : p.impl.wires)
      pool.add(output_equal(w.name, 1, 2), Provenance::AutoWireEq, w.name);
    for (const auto& o : p.attacker.body.outputs)
      pool.add(output_equal(o, 1, 2), Provenance::AutoAttackerEq, o);
    pool.add(Formula::iff(atom(tag(p.retire, 1)), atom(tag(p.retire, 2))), Provenance::AutoRetSync,
             "retire");
  }
  add_user(pool, p.user_candidates, paired);
  return pool.items;
}

namespace {

struct Setup {
  PairedCircuit pc;
  FormulaPtr initial, assumption, goal;
  std::vector<CandidateInvariant> ci;
};

Setup setup(const VerificationProblem& p) {
  check_problem(p);
  Setup s{verification_circuit(p), nullptr, nullptr, nullptr, {}};
  const Circuit& c = s.pc.circuit;
  std::vector<FormulaPtr> init;
  if (c.init) init.push_back(atom(c.init));
  for (const auto& r : p.impl.registers)
    if (p.uarch.count(r.name)) init.push_back(atom(register_equal(r, 1, 2)));
  s.initial = Formula::conj(init);
  FormulaPtr both_retire = atom(build::land(tag(p.retire, 1), tag(p.retire, 2)));
  s.assumption = Formula::implies(both_retire, outputs_equal(p.contract.body.outputs, 1, 2));
  s.goal = Formula::conj({outputs_equal(p.attacker.body.outputs, 1, 2),
                          Formula::iff(atom(tag(p.retire, 1)), atom(tag(p.retire, 2)))});
  s.ci = generate_candidates(p, c);
  return s;
}

}  // namespace

LearnRun learn_problem(const VerificationProblem& p) {
  Setup s = setup(p);
  return {s.ci.size(),
          learn_inv(s.pc.circuit, s.initial, s.assumption, p.lookahead, s.ci, p.solver, p.bottom_states)};
}

VerificationReport verify(const VerificationProblem& p) {
  auto t0 = Clock::now();
  Setup s = setup(p);
  LearnResult lr;
  try {
    lr = learn_inv(s.pc.circuit, s.initial, s.assumption, p.lookahead, s.ci, p.solver, p.bottom_states);
  } catch (const ResourceLimit& e) {
    return limited(p, e, s.ci.size(), t0);
  }
  return finish(s.pc.circuit, lr, s.goal, p, s.ci.size(), t0);
}

Circuit four_way_circuit(const Circuit& arch, const VerificationProblem& p) {
  Circuit la = compose(p.contract, arch);
  Circuit ai = compose(p.attacker, p.impl);
  if (la.width != ai.width) throw PreconditionError("arch and impl widths differ");
  return tagged_union(arch.name + "_4way_" + p.impl.name, {&la, &la, &ai, &ai}, {1, 2, 3, 4});
}

std::vector<CandidateInvariant> generate_candidates_4way(const Circuit& arch,
                                                         const VerificationProblem& p,
                                                         const Circuit& joined) {
  Pool pool;
  if (p.auto_candidates) {
    for (const auto& r : arch.registers) pool.add(atom(register_equal(r, 1, 2)), Provenance::AutoRegEq, r.name);
    for (const auto& r : p.impl.registers) pool.add(atom(register_equal(r, 3, 4)), Provenance::AutoRegEq, r.name);
    for (const auto& r : arch.registers) {
      pool.add(atom(register_equal(r, 1, 3)), Provenance::AutoRegEq, r.name);
      pool.add(atom(register_equal(r, 2, 4)), Provenance::AutoRegEq, r.name);
    }
    auto wire_eq = [&](const std::string& w, unsigned a, unsigned b) {
      pool.add(output_equal(w, a, b), Provenance::AutoWireEq, w);
    };
    for (const auto& w : arch.wires) wire_eq(w.name, 1, 2);
    for (const auto& w : p.impl.wires) wire_eq(w.name, 3, 4);
    for (const auto& o : p.attacker.body.outputs)
      pool.add(output_equal(o, 3, 4), Provenance::AutoAttackerEq, o);
    pool.add(Formula::iff(atom(tag(p.retire, 3)), atom(tag(p.retire, 4))), Provenance::AutoRetSync,
             "retire");
  }
  add_user(pool, p.user_candidates, joined);
  return pool.items;
}

VerificationReport verify_4way(const Circuit& arch, const VerificationProblem& p) {
  auto t0 = Clock::now();
  check_problem(p);
  check_combinatorial(p.contract, arch);
  std::set<std::string> want = arch_registers(p.impl, p.uarch), have;
  for (const auto& r : arch.registers) have.insert(r.name);
  if (want != have)
    throw PreconditionError("registers of " + arch.name + " differ from the ARCH set of " + p.impl.name);

  Circuit c = four_way_circuit(arch, p);
  std::vector<FormulaPtr> init;
  if (c.init) init.push_back(atom(c.init));
  for (const auto& r : arch.registers) {
    init.push_back(atom(register_equal(r, 1, 3)));
    init.push_back(atom(register_equal(r, 2, 4)));
  }
  for (const auto& r : p.impl.registers)
    if (p.uarch.count(r.name)) init.push_back(atom(register_equal(r, 3, 4)));
  FormulaPtr initial = Formula::conj(init);
  FormulaPtr assumption = outputs_equal(p.contract.body.outputs, 1, 2);

  auto ci = generate_candidates_4way(arch, p, c);
  LearnResult lr;
  try {
    lr = learn_inv(c, initial, assumption, p.lookahead, ci, p.solver, p.bottom_states);
  } catch (const ResourceLimit& e) {
    return limited(p, e, ci.size(), t0);
  }
  return finish(c, lr, outputs_equal(p.attacker.body.outputs, 3, 4), p, ci.size(), t0);
}

}  // namespace uvleak
