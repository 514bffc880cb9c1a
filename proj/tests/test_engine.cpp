#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "uvleak/engine.hpp"
#include "uvleak/error.hpp"

using namespace uvleak;

namespace {

VerificationProblem problem(const Design& d, const std::string& impl, const std::string& contract,
                            const std::string& attacker, const std::string& retire, unsigned b = 1) {
  VerificationProblem p;
  p.impl = *d.find_circuit(impl);
  p.contract = *d.find_monitor(contract);
  p.attacker = *d.find_monitor(attacker);
  p.retire = parse_expression(retire, &p.impl);
  p.lookahead = b;
  const Circuit& base = *d.find_circuit(p.contract.base);
  for (const auto& r : p.impl.registers)
    if (!base.find_register(r.name)) p.uarch.insert(r.name);
  return p;
}

VerificationProblem simp(unsigned b = 1) {
  static const Design d = fixture::design("simp.uv");
  VerificationProblem p = problem(d, "sIMP", "sLM", "sAT", "ret == 1", b);
  p.user_candidates = d.find_candidates("worked")->formulas;
  return p;
}

std::vector<std::string> texts(const std::vector<CandidateInvariant>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(candidate_text(c));
  return out;
}

std::vector<std::string> texts(const std::vector<DroppedCandidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(candidate_text(c.candidate));
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

Monitor extra_output(Monitor m, const std::string& name) {
  m.body.outputs.push_back(name);
  return m;
}

}  // namespace

TEST_CASE("automatic candidates for sIMP") {
  VerificationProblem p = simp();
  p.user_candidates = {"st.1 == 0 -> ret.1 == 1"};
  PairedCircuit pc = verification_circuit(p);
  auto ci = generate_candidates(p, pc.circuit);
  auto t = texts(ci);
  for (const char* want : {"pc.1 == pc.2", "st.1 == st.2", "res.1 == res.2", "ret.1 == ret.2", "reg.1 == reg.2",
                           "ret.1 == 1 <-> ret.2 == 1", "st.1 == 0 -> ret.1 == 1"})
    CHECK(has(t, want));
  CHECK(std::any_of(ci.begin(), ci.end(), [](const CandidateInvariant& c) {
    return c.provenance == Provenance::AutoRegEq && c.label == "m" &&
           candidate_text(c).find("m.1[15] == m.2[15]") != std::string::npos;
  }));
  auto user = std::find_if(ci.begin(), ci.end(), [](auto& c) { return c.provenance == Provenance::User; });
  REQUIRE(user != ci.end());
  CHECK(candidate_text(*user) == "st.1 == 0 -> ret.1 == 1");
  auto sync = std::find_if(ci.begin(), ci.end(), [](auto& c) { return c.provenance == Provenance::AutoRetSync; });
  CHECK(sync != ci.end());
  CHECK(provenance_name(Provenance::AutoAttackerEq) == "attacker");
}

TEST_CASE("wireless circuits get register, attacker and sync candidates only") {
  VerificationProblem p = simp();
  p.user_candidates.clear();
  auto ci = generate_candidates(p, verification_circuit(p).circuit);
  // 6 registers, the attacker's pc (a duplicate of pc.1 == pc.2), retire sync.
  CHECK(ci.size() == 7);
  for (const auto& c : ci) CHECK(c.provenance != Provenance::AutoWireEq);
}

TEST_CASE("duplicate candidates are kept once") {
  VerificationProblem p = simp();
  p.user_candidates = {"pc.1 == pc.2", "pc.1 == pc.2"};
  p.auto_candidates = false;
  CHECK(generate_candidates(p, verification_circuit(p).circuit).size() == 1);
}

TEST_CASE("LearnInv on the worked example") {
  VerificationProblem p = simp();
  p.auto_candidates = false;
  VerificationReport rep = verify(p);
  CHECK(rep.verdict == Verdict::Satisfied);
  CHECK(texts(rep.learned) ==
        std::vector<std::string>{"pc.1 == pc.2", "st.1 == st.2", "ret.1 == ret.2", "st.1 == 0 -> ret.1 == 1"});
  auto dropped = texts(rep.dropped);
  std::sort(dropped.begin(), dropped.end());
  CHECK(dropped == std::vector<std::string>{"res.1 == res.2", "st.1 == 1 -> ret.1 == 1"});
  for (const auto& d : rep.dropped) CHECK(d.inductive);
}

TEST_CASE("learn_problem matches verify") {
  VerificationProblem p = simp();
  LearnRun run = learn_problem(p);
  VerificationReport rep = verify(p);
  CHECK(texts(run.result.learned) == texts(rep.learned));
  CHECK(run.candidates == rep.candidates);
}

TEST_CASE("LearnInv with no candidates") {
  VerificationProblem p = simp();
  PairedCircuit pc = verification_circuit(p);
  LearnResult r = learn_inv(pc.circuit, Formula::truth(), Formula::truth(), 1, {});
  CHECK(r.learned.empty());
  CHECK(r.stats.iterations_base == 1);
  CHECK(r.stats.iterations_inductive == 0);
}

TEST_CASE("LearnInv drops the counter's false candidate in the base phase") {
  Design d = fixture::design("counter.uv");
  const Circuit& n = *d.find_circuit("N");
  std::vector<CandidateInvariant> ci{{parse_formula("i < 3", n), Provenance::User, "a"},
                                     {parse_formula("i == i", n), Provenance::User, "b"}};
  LearnResult r = learn_inv(n, parse_formula("i == 0", n), Formula::truth(), 1, ci);
  CHECK(texts(r.learned) == std::vector<std::string>{"i == i"});
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0].inductive);
  CHECK_THROWS_AS(learn_inv(n, Formula::truth(), Formula::truth(), 1,
                            {{parse_formula("G (i == i)", n), Provenance::User, "g"}}),
                  PreconditionError);
}

TEST_CASE("verify sIMP") {
  VerificationReport rep = verify(simp());
  CHECK(rep.verdict == Verdict::Satisfied);
  CHECK_FALSE(rep.resource_limited);
  CHECK(rep.stats.solver_queries > 0);
  CHECK_FALSE(rep.cex.has_value());
}

TEST_CASE("an attacker that sees res is not proved") {
  VerificationProblem p = simp();
  p.attacker = extra_output(p.attacker, "res");
  VerificationReport rep = verify(p);
  CHECK(rep.verdict == Verdict::NotProved);
  REQUIRE(rep.cex.has_value());
  CHECK(dump_trace(*rep.cex).find("res.1=") != std::string::npos);
  OracleResult o = oracle_leak_order(p.impl, p.contract, p.attacker, p.uarch, p.retire, oracle_bounds(), 16);
  CHECK_FALSE(o.holds);
}

TEST_CASE("an attacker without outputs is always satisfied") {
  VerificationProblem p = simp();
  p.attacker.body.outputs.clear();
  CHECK(verify(p).verdict == Verdict::Satisfied);
}

TEST_CASE("verify preconditions") {
  VerificationProblem p = simp();
  p.lookahead = 0;
  CHECK_THROWS_AS(verify(p), PreconditionError);
  p = simp();
  p.uarch.insert("ghost");
  CHECK_THROWS_AS(verify(p), PreconditionError);
  p = simp();
  Design d = parse_design("monitor S on sIMP { reg seen = 0; seen <= pc; output seen; }");
  p.attacker = d.monitors[0];
  CHECK_THROWS_AS(verify(p), PreconditionError);
  p = simp();
  p.retire = nullptr;
  CHECK_THROWS_AS(verify(p), PreconditionError);
}

TEST_CASE("resource limits are reported") {
  Design d = fixture::design("mini_re.uv");
  VerificationProblem q = problem(d, "miniRE", "O_leak", "RE_AT", "retired == 1", 3);
  q.user_candidates = d.find_candidates("pipeline")->formulas;
  q.solver.conflict_budget = 1;
  VerificationReport rep = verify(q);
  CHECK(rep.verdict == Verdict::NotProved);
  CHECK(rep.resource_limited);
  CHECK(rep.reason.find("resource limit") == 0);
}

TEST_CASE("leaky mutant") {
  Design d = fixture::design("mutants/leaky.uv");
  VerificationProblem p = problem(d, "sIMP_leaky", "sLM", "sAT", "ret == 1");
  p.user_candidates = d.find_candidates("worked")->formulas;
  for (unsigned b : {1u, 2u, 4u}) {
    p.lookahead = b;
    CHECK(verify(p).verdict == Verdict::NotProved);
  }
  OracleResult o = oracle_leak_order(p.impl, p.contract, p.attacker, p.uarch, p.retire, oracle_bounds(), 16);
  REQUIRE_FALSE(o.holds);
  REQUIRE(o.pair.has_value());
  CHECK(o.pair->first != o.pair->second);
  CHECK(o.detail.find("attacker.a: ") != std::string::npos);
  CHECK(check_isa_compliance(p.impl, *d.find_circuit("sISA"), p.retire, oracle_bounds(), 16).pass);
}

TEST_CASE("four-way construction") {
  Design d = fixture::design("simp.uv");
  VerificationProblem p = simp(16);
  p.user_candidates = d.find_candidates("zero_cells")->formulas;
  const Circuit& isa = *d.find_circuit("sISA");
  Circuit c = four_way_circuit(isa, p);
  for (const char* r : {"pc.1", "pc.2", "ret.3", "ret.4"}) CHECK(c.find_register(r));
  CHECK_FALSE(c.find_register("ret.1"));
  auto ci = generate_candidates_4way(isa, p, c);
  auto t = texts(ci);
  CHECK(has(t, "pc.1 == pc.3"));
  CHECK(has(t, "st.3 == st.4"));
  CHECK(has(t, "ret.3 == 1 <-> ret.4 == 1"));

  VerificationReport four = verify_4way(isa, p);
  CHECK(four.verdict == Verdict::Satisfied);
  CHECK(four.verdict == verify(simp()).verdict);

  VerificationProblem wrong = p;
  wrong.uarch = {"st", "ret"};
  CHECK_THROWS_AS(verify_4way(isa, wrong), PreconditionError);
}

TEST_CASE("four-way rejects the leaky mutant") {
  Design d = fixture::design("mutants/leaky.uv");
  VerificationProblem p = problem(d, "sIMP_leaky", "sLM", "sAT", "ret == 1", 16);
  CHECK(verify_4way(*d.find_circuit("sISA"), p).verdict == Verdict::NotProved);
}

TEST_CASE("ISA compliance") {
  Design d = fixture::design("simp.uv");
  ExprPtr ret = parse_expression("ret == 1");
  IsaResult ok = check_isa_compliance(*d.find_circuit("sIMP"), *d.find_circuit("sISA"), ret, oracle_bounds(), 16);
  CHECK(ok.pass);
  CHECK(ok.states_checked == 1024);

  Design skip = fixture::design("mutants/skip_pc.uv");
  IsaResult s = check_isa_compliance(*skip.find_circuit("sIMP_skip_pc"), *skip.find_circuit("sISA"), ret,
                                     oracle_bounds(), 16);
  CHECK_FALSE(s.pass);
  CHECK(s.condition == 1);
  REQUIRE(s.initial.has_value());
  CHECK(s.initial->get("m", 0) == Value::of(0));

  Design early = fixture::design("mutants/early_write.uv");
  IsaResult e = check_isa_compliance(*early.find_circuit("sIMP_early_write"), *early.find_circuit("sISA"), ret,
                                     oracle_bounds(), 16);
  CHECK_FALSE(e.pass);
  CHECK(e.condition == 2);
}

TEST_CASE("leak-order oracle on sIMP") {
  VerificationProblem p = simp();
  OracleResult o = oracle_leak_order(p.impl, p.contract, p.attacker, p.uarch, p.retire, oracle_bounds(), 16);
  CHECK(o.holds);
  CHECK(o.states_checked == 1024);
}

TEST_CASE("example 8 pairs") {
  Design d = fixture::design("simp.uv");
  Circuit lm = compose(*d.find_monitor("sLM"), *d.find_circuit("sISA"));
  Circuit at = compose(*d.find_monitor("sAT"), *d.find_circuit("sIMP"));
  Simulator lsim(lm), asim(at);
  auto contract = [&](std::vector<uint64_t> cells) {
    return fixture::nums(lsim.trace_prefix(fixture::with_memory(lsim, cells), 6).column("leak"));
  };
  auto attacker = [&](std::vector<uint64_t> cells) {
    return fixture::nums(asim.trace_prefix(fixture::with_memory(asim, cells), 8).column("pc"));
  };
  auto a = contract({1, 0, 2}), a2 = contract({5, 1, 3});
  CHECK(a == std::vector<long long>{0, 1, 0, 1, 1, 1});
  CHECK(a2 == std::vector<long long>{0, 0, 0, 1, 1, 1});
  CHECK(a[1] != a2[1]);
  CHECK(contract({5, 0, 3}) == a);
  CHECK(attacker({1, 0, 2}) == std::vector<long long>{0, 0, 1, 2, 2, 3, 4, 5});
  CHECK(attacker({5, 0, 3}) == attacker({1, 0, 2}));
}

TEST_CASE("contract oracle agrees with leak order under ISA compliance") {
  for (const char* file : {"simp.uv", "mutants/leaky.uv"}) {
    CAPTURE(file);
    Design d = fixture::design(file);
    std::string impl = std::string(file) == "simp.uv" ? "sIMP" : "sIMP_leaky";
    VerificationProblem p = problem(d, impl, "sLM", "sAT", "ret == 1");
    const Circuit& isa = *d.find_circuit("sISA");
    REQUIRE(check_isa_compliance(p.impl, isa, p.retire, oracle_bounds(), 16).pass);
    OracleResult lo = oracle_leak_order(p.impl, p.contract, p.attacker, p.uarch, p.retire, oracle_bounds(), 16);
    OracleResult cs = oracle_contract_satisfaction(isa, p.impl, p.contract, p.attacker, p.uarch, oracle_bounds(), 16);
    CHECK(lo.holds == cs.holds);
  }
}

TEST_CASE("mini-RE") {
  Design d = fixture::design("mini_re.uv");
  const Circuit& arch = *d.find_circuit("miniR");
  ExprPtr ret = parse_expression("retired == 1");
  CHECK(check_isa_compliance(*d.find_circuit("miniRE"), arch, ret, oracle_bounds(), 16).pass);

  VerificationProblem o = problem(d, "miniRE", "O_leak", "RE_AT", "retired == 1", 2);
  o.user_candidates = d.find_candidates("pipeline")->formulas;
  CHECK(verify(o).verdict == Verdict::Satisfied);
  o.lookahead = 1;
  CHECK(verify(o).verdict == Verdict::NotProved);
  CHECK(oracle_leak_order(o.impl, o.contract, o.attacker, o.uarch, o.retire, oracle_bounds(), 16).holds);

  VerificationProblem i = problem(d, "miniRE", "I_leak", "RE_AT", "retired == 1", 4);
  i.user_candidates = d.find_candidates("pipeline")->formulas;
  CHECK(verify(i).verdict == Verdict::NotProved);
  OracleResult v = oracle_leak_order(i.impl, i.contract, i.attacker, i.uarch, i.retire, oracle_bounds(), 16);
  CHECK_FALSE(v.holds);
  CHECK_FALSE(oracle_contract_satisfaction(arch, i.impl, i.contract, i.attacker, i.uarch, oracle_bounds(), 16).holds);
}

TEST_CASE("report formats") {
  VerificationProblem p = simp();
  p.auto_candidates = false;
  VerificationReport rep = verify(p);
  std::string kv = format_report_kv(rep, false);
  CHECK(kv ==
        "result=Satisfied\n"
        "invariants_learned=4\n"
        "iterations_base=1\n"
        "iterations_inductive=2\n"
        "solver_queries=4\n"
        "lookahead=1\n"
        "invariant.1=pc.1 == pc.2\n"
        "invariant.2=st.1 == st.2\n"
        "invariant.3=ret.1 == ret.2\n"
        "invariant.4=st.1 == 0 -> ret.1 == 1\n");
  CHECK(format_report_kv(rep, true).find("seconds=") != std::string::npos);
  std::string human = format_report_human(rep, false);
  CHECK(human.rfind("verdict: Satisfied\n", 0) == 0);
  CHECK(human.find("st.1 == 0 -> ret.1 == 1") != std::string::npos);
  CHECK(verdict_name(Verdict::CounterexampleFound) == "CounterexampleFound");
}
