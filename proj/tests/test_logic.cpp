#include <doctest.h>

#include <cstdlib>
#include <random>

#include "support.hpp"
#include "uvleak/bitblast.hpp"
#include "uvleak/domain.hpp"
#include "uvleak/error.hpp"
#include "uvleak/sat.hpp"
#include "uvleak/temporal.hpp"
#include "uvleak/transforms.hpp"
#include "uvleak/validity.hpp"

using namespace uvleak;

namespace {

SatResult solve(const std::vector<std::vector<Lit>>& clauses, int nvars, std::vector<Lit> assume = {},
                SolverOptions opts = {}) {
  Solver s(opts);
  for (int i = 0; i < nvars; ++i) s.new_var();
  for (const auto& c : clauses) s.add_clause(c);
  return s.solve(assume);
}

// Pigeons into holes; unsatisfiable when pigeons > holes.
std::vector<std::vector<Lit>> pigeonhole(int pigeons, int holes) {
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<std::vector<Lit>> cs;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    cs.push_back(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) cs.push_back({-var(p, h), -var(q, h)});
  return cs;
}

bool brute_force_sat(const std::vector<std::vector<Lit>>& cs, int nvars) {
  for (uint32_t a = 0; a < (1u << nvars); ++a) {
    bool all = true;
    for (const auto& c : cs) {
      bool any = false;
      for (Lit l : c) {
        bool v = (a >> (std::abs(l) - 1)) & 1;
        if ((l > 0) == v) any = true;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Value of e at cycle 0 of a state pinned to mu, computed through the CNF.
Value symbolic_eval(const Circuit& c, const Valuation& mu, const ExprPtr& e) {
  CnfBuilder cnf;
  Unrolling u(cnf, c);
  u.pin(mu);
  SymValue v = u.eval(0, e);
  SatOutcome out = solve_cnf(cnf, {});
  REQUIRE(out.result == SatResult::Sat);
  if (!out.value(v.defined)) return Value::bottom();
  uint64_t bits = 0;
  for (size_t i = 0; i < v.bits.size(); ++i)
    if (out.value(v.bits[i])) bits |= uint64_t{1} << i;
  return Value::of(bits);
}

struct EnvGuard {
  std::string name;
  explicit EnvGuard(std::string n, const std::string& value) : name(std::move(n)) {
    ::setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("solver on small instances") {
  CHECK(solve({{1, 2}, {-1, 2}, {1, -2}}, 2) == SatResult::Sat);
  CHECK(solve({{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}, 2) == SatResult::Unsat);
  CHECK(solve({}, 3) == SatResult::Sat);
  CHECK(solve({{1}, {-1}}, 1) == SatResult::Unsat);
  CHECK(solve(pigeonhole(5, 4), 20) == SatResult::Unsat);
  CHECK(solve(pigeonhole(4, 4), 16) == SatResult::Sat);
}

TEST_CASE("solver assumptions and models") {
  Solver s;
  for (int i = 0; i < 3; ++i) s.new_var();
  s.add_clause(std::vector<Lit>{1, 2});
  s.add_clause(std::vector<Lit>{-1, 3});
  CHECK(s.solve(std::vector<Lit>{-2}) == SatResult::Sat);
  CHECK(s.model_value(1));
  CHECK(s.model_value(3));
  CHECK(s.solve(std::vector<Lit>{-2, -3}) == SatResult::Unsat);
  CHECK(s.solve() == SatResult::Sat);
}

TEST_CASE("solver gives up within its budget") {
  SolverOptions opts;
  opts.conflict_budget = 5;
  CHECK(solve(pigeonhole(9, 8), 72, {}, opts) == SatResult::Unknown);
}

TEST_CASE("solver agrees with brute force on random 3-SAT") {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    int nvars = 4 + static_cast<int>(rng() % 9);
    int nclauses = static_cast<int>(nvars * (3 + rng() % 3));
    std::vector<std::vector<Lit>> cs;
    for (int i = 0; i < nclauses; ++i) {
      std::vector<Lit> c;
      for (int j = 0; j < 3; ++j) {
        Lit v = 1 + static_cast<int>(rng() % nvars);
        c.push_back(rng() % 2 ? v : -v);
      }
      cs.push_back(c);
    }
    SolverOptions opts;
    opts.seed = round;
    Solver s(opts);
    for (int i = 0; i < nvars; ++i) s.new_var();
    for (const auto& c : cs) s.add_clause(c);
    SatResult r = s.solve();
    CAPTURE(round);
    REQUIRE(r == (brute_force_sat(cs, nvars) ? SatResult::Sat : SatResult::Unsat));
    if (r == SatResult::Sat)
      for (const auto& c : cs) {
        bool any = false;
        for (Lit l : c) any = any || s.model_value(l);
        CHECK(any);
      }
  }
}

TEST_CASE("gate encodings") {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        CnfBuilder cnf;
        Lit x = cnf.new_var(), y = cnf.new_var(), z = cnf.new_var();
        Lit g_and = cnf.land(x, y), g_xor = cnf.lxor(x, y), g_ite = cnf.ite(x, y, z);
        Lit g_all = cnf.land_all(std::vector<Lit>{x, y, z}), g_any = cnf.lor_all(std::vector<Lit>{x, y, z});
        std::vector<Lit> pins{a ? x : -x, b ? y : -y, c ? z : -z};
        SatOutcome out = solve_cnf(cnf, {}, pins);
        REQUIRE(out.result == SatResult::Sat);
        CHECK(out.value(g_and) == (a && b));
        CHECK(out.value(g_xor) == (a != b));
        CHECK(out.value(g_ite) == (a ? b : c));
        CHECK(out.value(g_all) == (a && b && c));
        CHECK(out.value(g_any) == (a || b || c));
      }
  CnfBuilder cnf;
  Lit x = cnf.new_var(), y = cnf.new_var();
  CHECK(cnf.land(x, y) == cnf.land(y, x));
  CHECK(cnf.land(x, CnfBuilder::kTrue) == x);
  CHECK(cnf.land(x, -x) == CnfBuilder::kFalse);
}

TEST_CASE("DIMACS text") {
  std::string text = to_dimacs(2, {{1, -2}, {2}}, std::vector<Lit>{-1});
  CHECK(text == "p cnf 2 3\n1 -2 0\n2 0\n-1 0\n");
  SatOutcome sat = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 0\n", 2);
  CHECK(sat.result == SatResult::Sat);
  CHECK(sat.value(1));
  CHECK_FALSE(sat.value(2));
  CHECK(parse_solver_output("s UNSATISFIABLE\n", 2).result == SatResult::Unsat);
  CHECK(parse_solver_output("s UNKNOWN\n", 2).result == SatResult::Unknown);
  CHECK_THROWS_AS(parse_solver_output("nothing\n", 2), Error);
}

TEST_CASE("external solver hook") {
  EnvGuard env("UVLEAK_SOLVER", UVLEAK_MINI_DIMACS);
  Design d = fixture::design("counter.uv");
  const Circuit& n = *d.find_circuit("N");
  CHECK_FALSE(check_validity(n, *parse_formula("i == 0 -> X (i == 2)", n), Backend::Symbolic).valid);
  CHECK(check_validity(n, *parse_formula("i == 0 -> X (i == 1)", n), Backend::Symbolic).valid);
  EnvGuard broken("UVLEAK_SOLVER", "/nonexistent/solver");
  CHECK_THROWS_AS(check_validity(n, *parse_formula("i == i", n), Backend::Symbolic), Error);
}

TEST_CASE("bit-blasted operators match the simulator") {
  const char* ops[] = {"a + b", "a - b", "a * b", "a / b", "a % b", "a & b", "a | b", "a ^ b",
                       "a << b", "a >> b", "a == b", "a != b", "a < b", "a <= b", "a > b", "a >= b",
                       "a && b", "a || b", "-a", "~a", "!a", "a ? b : 7", "a[3:1]", "a[b:0]",
                       "m[a]", "m[b] + m[a]", "a[2:2] == b[0:0]"};
  Circuit c = parse_circuit("circuit T width 4 { reg a = 0; reg b = 0; mem m[5]; }");
  Simulator sim(c);
  std::mt19937 rng(11);
  for (const char* text : ops) {
    ExprPtr e = parse_expression(text, &c);
    for (int round = 0; round < 25; ++round) {
      Valuation mu = sim.make_valuation();
      auto pick = [&]() { return rng() % 9 == 0 ? Value::bottom() : Value::of(rng() % 16); };
      mu.set("a", pick());
      mu.set("b", pick());
      for (uint32_t k = 0; k < 5; ++k) mu.set("m", k, pick());
      CAPTURE(text);
      CAPTURE(mu.str());
      CHECK(symbolic_eval(c, mu, e) == sim.eval(e, mu));
    }
  }
}

TEST_CASE("unrolling") {
  Design d = fixture::design("simp.uv");
  const Circuit& imp = *d.find_circuit("sIMP");
  CnfBuilder cnf;
  Unrolling u(cnf, imp);
  CHECK(u.depth() == 0);
  u.extend_to(2);
  CHECK(u.depth() == 2);
  Lit init = u.holds(0, *Formula::atom(imp.init));
  SatOutcome out = solve_cnf(cnf, {}, std::vector<Lit>{init});
  REQUIRE(out.result == SatResult::Sat);
  Simulator sim(imp);
  Valuation mu = u.decode(out, 0);
  CHECK(sim.satisfies(mu, imp.init));
  CHECK(u.decode(out, 1) == sim.step(mu));
  CHECK(u.decode(out, 2) == sim.run(mu, 2));

  Design isa_d = fixture::design("sisa.uv");
  const Circuit& isa = *isa_d.find_circuit("sISA");
  CnfBuilder cnf2;
  Unrolling v(cnf2, isa, false);
  Lit rel = v.holds(0, *parse_formula("X (pc == 5) && pc != 4", isa));
  CHECK(solve_cnf(cnf2, {}, std::vector<Lit>{rel}).result == SatResult::Unsat);
  Lit ok = v.holds(0, *parse_formula("X (pc == 5) && pc == 4", isa));
  CHECK(solve_cnf(cnf2, {}, std::vector<Lit>{ok}).result == SatResult::Sat);
}

TEST_CASE("formula evaluation on runs") {
  Design d = fixture::design("sisa.uv");
  const Circuit& isa = *d.find_circuit("sISA");
  Simulator sim(isa);
  Valuation mu = fixture::counting_memory(sim);
  auto at = [&](size_t i, const char* text) { return holds_at(sim, mu, i, *parse_formula(text, isa), 32); };
  CHECK(at(0, "pc == 0"));
  CHECK(at(0, "X (pc == 1)"));
  CHECK(at(0, "F<=3 (pc <= 3)"));
  CHECK(at(0, "F<=3 (pc < 3)"));
  CHECK_FALSE(at(0, "F<=4 (pc < 3)"));
  CHECK(at(2, "pc == 2 && reg == 1"));
  CHECK(at(0, "G (pc < 16)"));
  CHECK_FALSE(at(0, "G (pc < 15)"));
  CHECK(at(0, "pc == 1 -> reg == 9"));
  CHECK(at(0, "(pc == 0) <-> X (pc == 1)"));
  CHECK_FALSE(at(0, "!X (pc == 1)"));
  CHECK_THROWS_AS(holds_at(sim, mu, 0, *parse_formula("G (pc < 16)", isa), 8, true), HorizonExceeded);
  CHECK_THROWS_AS(holds_at(sim, mu, 0, *parse_formula("X X (pc < 16)", isa), 2), HorizonExceeded);
}

TEST_CASE("temporal depth") {
  CHECK(temporal_depth(*parse_formula("a")) == 0u);
  CHECK(temporal_depth(*parse_formula("X a")) == 1u);
  CHECK(temporal_depth(*parse_formula("F<=3 a")) == 2u);
  CHECK(temporal_depth(*parse_formula("X F<=2 a && X X X b")) == 3u);
  CHECK_FALSE(temporal_depth(*parse_formula("G a")).has_value());
  CHECK(contains_always(*parse_formula("a -> X G b")));
}

TEST_CASE("domains") {
  Design d = fixture::design("simp.uv");
  const Circuit& imp = *d.find_circuit("sIMP");
  auto pins = init_pins(imp.init);
  CHECK(pins.size() == 4);
  CHECK(pins.at("ret") == Value::of(1));
  CHECK(init_pins(parse_expression("x == 1 || y == 2")).empty());
  CHECK(init_pins(parse_expression("3 == x && (y < 2 && z == 0)")).size() == 2);

  Simulator sim(imp);
  DomainBounds b;
  b.value_bits = 2;
  b.memory_cells = 4;
  b.include_bottom = false;
  // res: 4 values; m: 4 cells of 4 values; pc, reg, st, ret pinned.
  CHECK(count_states(*sim.layout(), b, pins) == 4 * 256);
  b.include_bottom = true;
  CHECK(count_states(*sim.layout(), b, pins) == 5 * 625);
  b.max_states = 100;
  CHECK_THROWS_AS(count_states(*sim.layout(), b, pins), DomainTooLarge);

  DomainBounds exact;
  exact.values["pc"] = {Value::of(1), Value::of(9)};
  exact.value_bits = 1;
  exact.include_bottom = false;
  exact.memory_cells = 0;
  Simulator isa(*d.find_circuit("sISA"));
  std::vector<std::string> seen;
  enumerate_states(isa.layout(), exact, {}, [&](const Valuation& v) {
    seen.push_back(v.str().substr(0, 10));
    return true;
  });
  CHECK(seen == std::vector<std::string>{"pc=1 reg=0", "pc=1 reg=1", "pc=9 reg=0", "pc=9 reg=1"});
}

TEST_CASE("validity examples") {
  Circuit id = parse_circuit("reg x = 0; x <= x; output x;");
  DomainBounds defined;
  defined.include_bottom = false;
  defined.value_bits = 3;
  for (Backend be : {Backend::Exhaustive, Backend::Symbolic})
    CHECK(check_validity(id, *parse_formula("x == x", id), be, defined).valid);
  CHECK_FALSE(check_validity(id, *parse_formula("x == x", id), Backend::Symbolic).valid);

  Circuit isa3 = parse_circuit("reg pc[3] = 0; pc <= pc + 1;");
  for (Backend be : {Backend::Exhaustive, Backend::Symbolic})
    CHECK(check_validity(isa3, *parse_formula("pc == 0 -> X (pc == 1)", isa3), be).valid);

  Design d = fixture::design("counter.uv");
  const Circuit& n = *d.find_circuit("N");
  for (Backend be : {Backend::Exhaustive, Backend::Symbolic}) {
    DomainBounds small;
    small.value_bits = 2;
    ValidityResult r = check_validity(n, *parse_formula("i == 0 -> X (i == 2)", n), be, small);
    REQUIRE_FALSE(r.valid);
    REQUIRE(r.cex);
    CHECK(r.cex->initial.get("i") == Value::of(0));
    REQUIRE(r.cex->states.size() >= 2);
    CHECK(r.cex->states[1].get("i") == Value::of(1));
  }
  CHECK_THROWS_AS(check_validity(n, *parse_formula("G (i == i)", n), Backend::Symbolic), PreconditionError);
}

TEST_CASE("symbolic backend honours pins and bounds") {
  Design d = fixture::design("counter.uv");
  const Circuit& n = *d.find_circuit("N");
  Simulator sim(n);
  Valuation mu = sim.make_valuation();
  mu.set("i", Value::of(7));
  SymbolicOptions opts;
  opts.pinned = mu;
  CHECK(check_validity(n, *parse_formula("X (i == 8)", n), Backend::Symbolic, {}, opts).valid);
  DomainBounds small;
  small.value_bits = 2;
  small.include_bottom = false;
  CHECK(check_validity(n, *parse_formula("i < 4", n), Backend::Symbolic, small).valid);
  CHECK(check_validity(n, *parse_formula("i < 4", n), Backend::Exhaustive, small).valid);
  CHECK_FALSE(check_validity(n, *parse_formula("i < 3", n), Backend::Symbolic, small).valid);
}

TEST_CASE("state dumps") {
  Design d = fixture::design("sisa.uv");
  Circuit lm = compose(*d.find_monitor("sLM"), *d.find_circuit("sISA"));
  Simulator sim(lm);
  Valuation mu = sim.make_valuation();
  TraceDump t = state_dump(lm, {mu});
  REQUIRE(t.rows.size() == 1);
  CHECK(dump_trace(t).find("cycle=0 pc=0 reg=0 m[0]=0") != std::string::npos);
  CHECK(dump_trace(t).find("leak=1") != std::string::npos);
}
