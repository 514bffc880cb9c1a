// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "uvleak/domain.hpp"
#include "uvleak/engine.hpp"
#include "uvleak/error.hpp"
#include "uvleak/temporal.hpp"
#include "uvleak/transforms.hpp"
#include "uvleak/validity.hpp"

using namespace uvleak;
using fixture::nums;
using Seq = std::vector<long long>;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

// Collects failed expectations with a short reason.
struct Checker {
  Outcome out;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (out.pass) out.note = what;
    out.pass = false;
  }
};

std::string render(const Seq& s) {
  std::string r;
  for (size_t i = 0; i < s.size(); ++i) r += (i ? "·" : "") + (s[i] < 0 ? std::string("bot") : std::to_string(s[i]));
  return r;
}

VerificationProblem problem(const Design& d, const std::string& impl, const std::string& contract,
                            const std::string& attacker, const std::string& retire, unsigned b,
                            const std::string& block = "") {
  VerificationProblem p;
  p.impl = *d.find_circuit(impl);
  p.contract = *d.find_monitor(contract);
  p.attacker = *d.find_monitor(attacker);
  p.retire = parse_expression(retire, &p.impl);
  p.lookahead = b;
  const Circuit& base = *d.find_circuit(p.contract.base);
  for (const auto& r : p.impl.registers)
    if (!base.find_register(r.name)) p.uarch.insert(r.name);
  if (!block.empty()) p.user_candidates = d.find_candidates(block)->formulas;
  return p;
}

std::vector<std::string> texts(const std::vector<CandidateInvariant>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(candidate_text(c));
  std::sort(out.begin(), out.end());
  return out;
}

OracleResult leak_order(const VerificationProblem& p) {
  return oracle_leak_order(p.impl, p.contract, p.attacker, p.uarch, p.retire, oracle_bounds(), 16);
}

// --- criteria ----------------------------------------------------------------

Outcome sisa_traces() {
  Checker c;
  Design d = fixture::design("sisa.uv");
  Simulator sim(*d.find_circuit("sISA"));
  Valuation mu = fixture::counting_memory(sim);
  Seq full = nums(sim.trace_prefix(mu, 12).column("reg"));
  c.expect(full == Seq{0, 0, 1, 3, 6, 10, 15, 21, 28, 36, 45, 55}, "prefix " + render(full));
  Seq even = nums(sim.filtered_trace_prefix(mu, parse_expression("pc % 2 == 0"), 13).column("reg"));
  c.expect(even == Seq{0, 1, 6, 15, 28, 45, 55}, "filtered " + render(even));
  return c.out;
}

Outcome simp_traces() {
  Checker c;
  Design d = fixture::design("simp.uv");
  Simulator sim(*d.find_circuit("sIMP"));
  Valuation mu = fixture::counting_memory(sim);
  Seq full = nums(sim.trace_prefix(mu, 13).column("reg"));
  c.expect(full == Seq{0, 0, 0, 1, 1, 3, 3, 6, 6, 10, 10, 15, 15}, "prefix " + render(full));

  ExprPtr ret = parse_expression("ret == 1");
  auto states = sim.states(mu, 13);
  std::vector<size_t> retired;
  for (size_t i = 0; i < states.size(); ++i)
    if (sim.satisfies(states[i], ret)) retired.push_back(i);
  c.expect(retired == std::vector<size_t>{0, 1, 3, 5, 7, 9, 11}, "retirement positions differ");

  Simulator isa(*d.find_circuit("sISA"));
  for (size_t i = 1; i < states.size(); ++i)
    if (!sim.satisfies(states[i], ret))
      c.expect(states[i].reshaped(isa.layout()) == states[i - 1].reshaped(isa.layout()),
               "ARCH changes at non-retiring cycle " + std::to_string(i));
  return c.out;
}

Outcome monitor_traces() {
  Checker c;
  Design d = fixture::design("simp.uv");
  Simulator at(compose(*d.find_monitor("sAT"), *d.find_circuit("sIMP")));
  Seq pcs = nums(at.trace_prefix(fixture::counting_memory(at), 7).column("pc"));
  c.expect(pcs == Seq{0, 1, 1, 2, 2, 3, 3}, "sAT[sIMP] " + render(pcs));
  // m[0] = 0, so the first observation is 1.
  Simulator lm(compose(*d.find_monitor("sLM"), *d.find_circuit("sISA")));
  Seq leak = nums(lm.trace_prefix(fixture::counting_memory(lm), 4).column("leak"));
  c.expect(leak == Seq{1, 0, 0, 0}, "sLM[sISA] " + render(leak));
  return c.out;
}

Outcome memory_pairs() {
  Checker c;
  Design d = fixture::design("simp.uv");
  Simulator lm(compose(*d.find_monitor("sLM"), *d.find_circuit("sISA")));
  Simulator at(compose(*d.find_monitor("sAT"), *d.find_circuit("sIMP")));
  auto contract = [&](std::vector<uint64_t> m) {
    return nums(lm.trace_prefix(fixture::with_memory(lm, m), 6).column("leak"));
  };
  auto attacker = [&](std::vector<uint64_t> m) {
    return nums(at.trace_prefix(fixture::with_memory(at, m), 8).column("pc"));
  };
  Seq a = contract({1, 0, 2}), a2 = contract({5, 1, 3});
  c.expect(a[1] != a2[1] && a[0] == a2[0], "pair (a) should first differ at index 1");
  Seq b = contract({1, 0, 2}), b2 = contract({5, 0, 3});
  c.expect(b == Seq{0, 1, 0, 1, 1, 1} && b2 == b, "pair (b) contract " + render(b) + " / " + render(b2));
  Seq x = attacker({1, 0, 2}), x2 = attacker({5, 0, 3});
  c.expect(x == Seq{0, 0, 1, 2, 2, 3, 4, 5} && x2 == x, "pair (b) attacker " + render(x) + " / " + render(x2));
  return c.out;
}

Outcome worked_example() {
  Checker c;
  Design d = fixture::design("simp.uv");
  VerificationProblem p = problem(d, "sIMP", "sLM", "sAT", "ret == 1", 1, "worked");
  p.auto_candidates = false;
  VerificationReport rep = verify(p);
  std::vector<std::string> dropped;
  for (const auto& x : rep.dropped) dropped.push_back(candidate_text(x.candidate));
  std::sort(dropped.begin(), dropped.end());
  c.expect(dropped == std::vector<std::string>{"res.1 == res.2", "st.1 == 1 -> ret.1 == 1"}, "dropped set differs");
  c.expect(texts(rep.learned) == std::vector<std::string>{"pc.1 == pc.2", "ret.1 == ret.2",
                                                          "st.1 == 0 -> ret.1 == 1", "st.1 == st.2"},
           "learned set differs");
  c.expect(rep.verdict == Verdict::Satisfied, "verify is " + verdict_name(rep.verdict));
  return c.out;
}

struct CorpusProblem {
  std::string label;
  std::string file, impl, contract, attacker, retire, block;
  unsigned b;
};

const std::vector<CorpusProblem>& corpus_problems() {
  static const std::vector<CorpusProblem> ps{
      {"sIMP/sLM", "simp.uv", "sIMP", "sLM", "sAT", "ret == 1", "worked", 1},
      {"sIMP_leaky/sLM", "mutants/leaky.uv", "sIMP_leaky", "sLM", "sAT", "ret == 1", "worked", 1},
      {"miniRE/O_leak", "mini_re.uv", "miniRE", "O_leak", "RE_AT", "retired == 1", "pipeline", 2},
      {"miniRE/I_leak", "mini_re.uv", "miniRE", "I_leak", "RE_AT", "retired == 1", "pipeline", 2},
  };
  return ps;
}

Outcome soundness() {
  Checker c;
  int proved = 0;
  for (const auto& cp : corpus_problems()) {
    Design d = fixture::design(cp.file);
    VerificationProblem p = problem(d, cp.impl, cp.contract, cp.attacker, cp.retire, cp.b, cp.block);
    if (verify(p).verdict != Verdict::Satisfied) continue;
    ++proved;
    c.expect(leak_order(p).holds, cp.label + " proved but the oracle finds a violation");
  }
  c.expect(proved > 0, "no corpus problem was proved");
  if (c.out.pass) c.out.note = std::to_string(proved) + " proved problems, oracle holds on all";
  return c.out;
}

Outcome decoupling() {
  Checker c;
  struct Item {
    std::string file, impl, arch, contract, attacker, retire;
  };
  std::vector<Item> items{{"simp.uv", "sIMP", "sISA", "sLM", "sAT", "ret == 1"},
                          {"mutants/leaky.uv", "sIMP_leaky", "sISA", "sLM", "sAT", "ret == 1"},
                          {"mini_re.uv", "miniRE", "miniR", "O_leak", "RE_AT", "retired == 1"},
                          {"mini_re.uv", "miniRE", "miniR", "I_leak", "RE_AT", "retired == 1"}};
  for (const auto& it : items) {
    Design d = fixture::design(it.file);
    VerificationProblem p = problem(d, it.impl, it.contract, it.attacker, it.retire, 1);
    const Circuit& arch = *d.find_circuit(it.arch);
    IsaResult isa = check_isa_compliance(p.impl, arch, p.retire, oracle_bounds(), 16);
    c.expect(isa.pass, it.impl + " is not ISA compliant: " + isa.message);
    if (!isa.pass) continue;
    bool lo = leak_order(p).holds;
    bool cs = oracle_contract_satisfaction(arch, p.impl, p.contract, p.attacker, p.uarch, oracle_bounds(), 16).holds;
    c.expect(lo == cs, it.impl + "/" + it.contract + ": oracles disagree");
  }
  return c.out;
}

Outcome negative_controls() {
  Checker c;
  auto violated = [&](const CorpusProblem& cp, unsigned max_b) {
    Design d = fixture::design(cp.file);
    VerificationProblem p = problem(d, cp.impl, cp.contract, cp.attacker, cp.retire, 1, cp.block);
    OracleResult o = leak_order(p);
    c.expect(!o.holds && o.pair && o.pair->first != o.pair->second, cp.label + ": no oracle violation pair");
    for (unsigned b = 1; b <= max_b; ++b) {
      p.lookahead = b;
      c.expect(verify(p).verdict != Verdict::Satisfied, cp.label + " proved at b=" + std::to_string(b));
    }
  };
  violated(corpus_problems()[1], 4);
  violated(corpus_problems()[3], 6);

  const CorpusProblem& o = corpus_problems()[2];
  Design d = fixture::design(o.file);
  VerificationProblem p = problem(d, o.impl, o.contract, o.attacker, o.retire, 1, o.block);
  unsigned min_b = 0;
  for (unsigned b = 1; b <= 8 && !min_b; ++b) {
    p.lookahead = b;
    if (verify(p).verdict == Verdict::Satisfied) min_b = b;
  }
  c.expect(min_b != 0, "miniRE/O_leak not proved for b <= 8");
  if (c.out.pass) c.out.note = "miniRE/O_leak proved at minimum b=" + std::to_string(min_b);
  return c.out;
}

// Random small circuits and formulas for backend agreement.
class RandomCase {
 public:
  explicit RandomCase(uint32_t seed) : rng_(seed) {}

  std::string circuit() {
    std::ostringstream os;
    os << "circuit R width 3 {\n";
    nregs_ = 1 + pick(3);
    for (int i = 0; i < nregs_; ++i) os << "  reg " << reg(i) << "[" << 1 + pick(3) << "] = 0;\n";
    has_mem_ = pick(2);
    if (has_mem_) os << "  mem q[2] width 2;\n";
    for (int i = 0; i < nregs_; ++i)
      if (pick(5)) os << "  " << reg(i) << " <= " << expr(2) << ";\n";
    if (has_mem_ && pick(2)) os << "  q[" << expr(1) << "] <= " << expr(1) << " when " << expr(1) << ";\n";
    os << "  output " << reg(0) << ";\n}\n";
    return os.str();
  }

  std::string formula(int depth) {
    if (depth == 0 || pick(4) == 0) return "(" + atom() + ")";
    switch (pick(7)) {
      case 0: return "!" + formula(depth - 1);
      case 1: return "(" + formula(depth - 1) + " && " + formula(depth - 1) + ")";
      case 2: return "(" + formula(depth - 1) + " || " + formula(depth - 1) + ")";
      case 3: return "(" + formula(depth - 1) + " -> " + formula(depth - 1) + ")";
      case 4: return "X " + formula(depth - 1);
      case 5: return "F<=" + std::to_string(1 + pick(3)) + " " + formula(depth - 1);
      default: {
        // Often valid: a guarded step property.
        std::string g = formula(depth - 1);
        return "(" + g + " -> " + g + " || X " + formula(depth - 1) + ")";
      }
    }
  }

  bool include_bottom() { return pick(3) == 0; }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<uint32_t>(n)); }
  std::string reg(int i) const { return std::string(1, static_cast<char>('a' + i)); }

  std::string leaf() {
    int k = pick(has_mem_ ? 4 : 3);
    if (k == 0) return std::to_string(pick(8));
    if (k == 3) return "q[" + reg(pick(nregs_)) + "]";
    return reg(pick(nregs_));
  }

  std::string expr(int depth) {
    if (depth == 0 || pick(3) == 0) return leaf();
    static const char* ops[] = {"+", "-", "*", "&", "|", "^", "==", "<", "!=", ">>", "/", "%", "&&", "||"};
    switch (pick(5)) {
      case 0: return "(" + expr(depth - 1) + " ? " + expr(depth - 1) + " : " + expr(depth - 1) + ")";
      case 1: return "~" + leaf();
      default: return "(" + expr(depth - 1) + " " + ops[pick(14)] + " " + expr(depth - 1) + ")";
    }
  }

  std::string atom() {
    switch (pick(3)) {
      case 0: return expr(1) + " == " + expr(1);
      case 1: return expr(1) + " < " + expr(1);
      default: return expr(2);
    }
  }

  std::mt19937 rng_;
  int nregs_ = 1;
  bool has_mem_ = false;
};

Outcome backend_agreement() {
  Checker c;
  int valid = 0, refuted = 0;
  for (uint32_t seed = 1; seed <= 100; ++seed) {
    RandomCase gen(seed);
    Circuit circ = parse_circuit(gen.circuit());
    FormulaPtr f = parse_formula(gen.formula(3), circ);
    DomainBounds bounds;
    bounds.value_bits = 2;
    bounds.include_bottom = gen.include_bottom();
    std::string where = "seed " + std::to_string(seed);
    try {
      ValidityResult ex = check_validity(circ, *f, Backend::Exhaustive, bounds);
      ValidityResult sy = check_validity(circ, *f, Backend::Symbolic, bounds);
      c.expect(ex.valid == sy.valid, where + ": backends disagree on " + print_formula(*f));
      if (!sy.valid) {
        ++refuted;
        Simulator sim(circ);
        size_t horizon = *temporal_depth(*f) + 1;
        c.expect(sy.cex && !holds_at(sim, sy.cex->initial, 0, *f, horizon), where + ": counterexample does not refute");
        auto domains = cell_domains(*sim.layout(), bounds);
        for (size_t k = 0; sy.cex && k < domains.size(); ++k) {
          const auto& dom = domains[k];
          c.expect(std::find(dom.begin(), dom.end(), sy.cex->initial.cells()[k]) != dom.end(),
                   where + ": counterexample leaves the bounds");
        }
      } else {
        ++valid;
      }
    } catch (const Error& e) {
      c.expect(false, where + ": " + e.what());
    }
  }
  if (c.out.pass)
    c.out.note = "100 cases, " + std::to_string(valid) + " valid, " + std::to_string(refuted) + " refuted";
  return c.out;
}

Outcome four_way() {
  Checker c;
  std::ostringstream note;
  struct Item {
    std::string file, impl;
    bool zero_cells;
  };
  for (const Item& it : {Item{"simp.uv", "sIMP", true}, Item{"mutants/leaky.uv", "sIMP_leaky", false}}) {
    Design d = fixture::design(it.file);
    VerificationProblem two = problem(d, it.impl, "sLM", "sAT", "ret == 1", 1, "worked");
    VerificationReport r2 = verify(two);
    VerificationProblem four = problem(d, it.impl, "sLM", "sAT", "ret == 1", 16, it.zero_cells ? "zero_cells" : "");
    VerificationReport r4 = verify_4way(*d.find_circuit("sISA"), four);
    c.expect(r2.verdict == r4.verdict, it.impl + ": verify " + verdict_name(r2.verdict) + ", verify_4way " +
                                           verdict_name(r4.verdict));
    char secs[64];
    std::snprintf(secs, sizeof secs, "%.3fs vs %.3fs", r2.seconds, r4.seconds);
    note << (note.tellp() > 0 ? "; " : "") << it.impl << " " << verdict_name(r2.verdict) << ": queries "
         << r2.stats.solver_queries << " vs " << r4.stats.solver_queries << " (4-way), " << secs;
  }
  if (c.out.pass) c.out.note = note.str();
  return c.out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_secs;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "sISA trace and filtered trace", 1, sisa_traces},
      {2, "sIMP trace, retirement and frame stability", 1, simp_traces},
      {3, "monitor traces", 1, monitor_traces},
      {4, "contract and attacker traces of the memory pairs", 1, memory_pairs},
      {5, "LearnInv worked example", 10, worked_example},
      {6, "verify soundness against the leak-order oracle", 300, soundness},
      {7, "ISA compliance and oracle agreement", 300, decoupling},
      {8, "negative controls and mini-RE", 1800, negative_controls},
      {9, "exhaustive and symbolic backends agree", 600, backend_agreement},
      {10, "verify and verify_4way agree", 3600, four_way},
  };
  int failed = 0;
  for (const auto& cr : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit_secs) {
      o.pass = false;
      o.note = "took longer than " + std::to_string(static_cast<int>(cr.limit_secs)) + " s";
    }
    if (!o.pass) ++failed;
    char time[32];
    std::snprintf(time, sizeof time, "%.3fs", secs);
    std::cout << "criterion " << cr.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << cr.name << " [" << time
              << "]" << (o.note.empty() ? "" : "  " + o.note) << std::endl;
  }
  return failed ? 1 : 0;
}
