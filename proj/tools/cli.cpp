#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "uvleak/domain.hpp"
#include "uvleak/engine.hpp"
#include "uvleak/error.hpp"
#include "uvleak/textio.hpp"
#include "uvleak/transforms.hpp"
#include "uvleak/validate.hpp"

namespace uvleak::cli {

namespace {

// Input errors that are not parse errors.
struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Value parse_value(const std::string& text) {
  auto v = Value::parse(trim(text));
  if (!v) throw UsageError("bad value '" + text + "'");
  return *v;
}

struct Options {
  std::vector<std::string> files;
  std::string format = "human";
  std::string out_path;
  uint64_t seed = 0;
  bool timing = false;

  std::string circuit, monitor, impl, arch, contract, attacker, retire, init, filter, kind;
  std::vector<std::string> sets, mems, values, candidates;
  std::string uarch;
  bool uarch_given = false;
  unsigned cycles = 10;
  unsigned lookahead = 1;
  bool no_auto = false;
  uint64_t conflicts = 0;
  double time_limit = 0;
  size_t horizon = 16;
  unsigned value_bits = 2;
  uint32_t mem_cells = 4;
  bool bottom = false;
  uint64_t max_states = 5'000'000;
};

bool kv(const Options& o) { return o.format == "kv"; }

Design load(const Options& o) {
  Design all;
  for (const auto& f : o.files) {
    std::string text;
    try {
      text = read_text_file(f);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    Design d;
    try {
      d = parse_design(text);
    } catch (const ParseError& e) {
      throw UsageError(f + ":" + e.what());
    }
    for (auto& c : d.circuits) {
      if (all.find_circuit(c.name) || all.find_monitor(c.name))
        throw UsageError("duplicate definition of " + c.name + " in " + f);
      all.circuits.push_back(std::move(c));
    }
    for (auto& m : d.monitors) {
      if (all.find_circuit(m.name) || all.find_monitor(m.name))
        throw UsageError("duplicate definition of " + m.name + " in " + f);
      all.monitors.push_back(std::move(m));
    }
    for (auto& b : d.candidate_blocks) all.candidate_blocks.push_back(std::move(b));
  }
  return all;
}

const Circuit& need_circuit(const Design& d, const std::string& name, const char* role) {
  if (name.empty()) {
    if (d.circuits.size() == 1) return d.circuits.front();
    throw UsageError(std::string("--") + role + " is required when the input defines several circuits");
  }
  const Circuit* c = d.find_circuit(name);
  if (!c) throw UsageError("no circuit named " + name);
  return *c;
}

const Monitor& need_monitor(const Design& d, const std::string& name, const char* role) {
  if (name.empty()) throw UsageError(std::string("--") + role + " is required");
  const Monitor* m = d.find_monitor(name);
  if (!m) throw UsageError("no monitor named " + name);
  return *m;
}

ExprPtr parse_over(const std::string& text, const Circuit& c, const char* what) {
  try {
    return parse_expression(text, &c);
  } catch (const ParseError& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

DomainBounds bounds_of(const Options& o) {
  DomainBounds b;
  b.value_bits = o.value_bits;
  b.memory_cells = o.mem_cells;
  b.include_bottom = o.bottom;
  b.max_states = o.max_states;
  for (const auto& spec : o.values) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("--values expects name:v1,v2,...");
    std::vector<Value> vs;
    for (const auto& t : split(spec.substr(colon + 1), ',')) vs.push_back(parse_value(t));
    b.values[trim(spec.substr(0, colon))] = vs;
  }
  return b;
}

std::set<std::string> uarch_of(const Options& o, const Design& d, const Circuit& impl,
                               const Monitor& contract) {
  std::set<std::string> u;
  if (o.uarch_given) {
    for (const auto& r : split(o.uarch, ',')) u.insert(trim(r));
    return u;
  }
  const Circuit* base = d.find_circuit(contract.base);
  if (!base)
    throw UsageError("cannot infer the uarch registers: " + contract.base + " is not defined; pass --uarch");
  for (const auto& r : impl.registers)
    if (!base->find_register(r.name)) u.insert(r.name);
  return u;
}

VerificationProblem problem_of(const Options& o, const Design& d, bool four_way) {
  VerificationProblem p;
  p.impl = need_circuit(d, o.impl, "impl");
  p.contract = need_monitor(d, o.contract, "contract");
  p.attacker = need_monitor(d, o.attacker, "attacker");
  p.retire = parse_over(o.retire, p.impl, "--retire");
  p.lookahead = o.lookahead;
  p.uarch = uarch_of(o, d, p.impl, p.contract);
  p.auto_candidates = !o.no_auto;
  p.bottom_states = o.bottom;
  p.solver.seed = o.seed;
  p.solver.conflict_budget = o.conflicts;
  p.solver.time_limit_secs = o.time_limit;
  auto take = [&](const CandidateBlock& b) {
    p.user_candidates.insert(p.user_candidates.end(), b.formulas.begin(), b.formulas.end());
  };
  if (!o.candidates.empty()) {
    for (const auto& name : o.candidates) {
      const CandidateBlock* b = d.find_candidates(name);
      if (!b) throw UsageError("no candidates block named " + name);
      take(*b);
    }
  } else {
    for (const auto& b : d.candidate_blocks)
      if (b.target == p.impl.name && (four_way ? b.max_copy > 2 : b.max_copy <= 2)) take(b);
  }
  return p;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw UsageError("cannot write " + o.out_path);
  f << text;
}

// "key: value" lines to "key=value".
std::string as_kv(const std::string& detail) {
  std::string out;
  for (const auto& line : split(detail, '\n')) {
    auto p = line.find(": ");
    out += (p == std::string::npos ? line : line.substr(0, p) + "=" + line.substr(p + 2)) + "\n";
  }
  return out;
}

// --- subcommands ------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  Design d = load(o);
  std::ostringstream os;
  bool bad = false;
  auto report = [&](const std::string& what, const Diagnostics& diags) {
    bad = bad || has_errors(diags);
    if (kv(o)) {
      os << what << "=" << (has_errors(diags) ? "error" : "ok") << "\n";
      for (size_t i = 0; i < diags.size(); ++i)
        os << what << ".diagnostic." << i + 1 << "=" << diags[i].location << ": " << diags[i].message << "\n";
    } else {
      os << what << ": " << (has_errors(diags) ? "errors" : "ok") << "\n";
      if (!diags.empty()) os << format_diagnostics(diags);
    }
  };
  for (const auto& c : d.circuits)
    if (o.circuit.empty() || o.circuit == c.name) report("circuit." + c.name, validate(c));
  for (const auto& m : d.monitors) {
    const Circuit* base = d.find_circuit(m.base);
    if (!base || (!o.circuit.empty() && o.circuit != m.base)) continue;
    MonitorCheck chk = check_monitor(m, *base);
    report("monitor." + m.name, chk.diagnostics);
    if (kv(o))
      os << "monitor." << m.name << ".combinatorial=" << (chk.is_combinatorial ? 1 : 0) << "\n";
    else if (chk.is_monitoring)
      os << "  " << (chk.is_combinatorial ? "combinatorial" : "stateful") << " monitor on " << m.base << "\n";
  }
  emit(o, out, os.str());
  return bad ? kViolation : kOk;
}

std::string render_trace(const Options& o, const TraceDump& t, const std::vector<std::string>& cols) {
  if (kv(o)) return dump_trace(t);
  std::ostringstream os;
  os << t.role << ":\n";
  for (const auto& c : cols) os << "  " << c << ": " << join_values(t.column(c)) << "\n";
  return os.str();
}

int cmd_simulate(const Options& o, std::ostream& out) {
  Design d = load(o);
  Circuit c = need_circuit(d, o.circuit, "circuit");
  if (!o.monitor.empty()) c = compose(need_monitor(d, o.monitor, "monitor"), c);
  Simulator sim(c);
  Valuation mu = sim.make_valuation();
  ExprPtr init;
  if (!o.init.empty()) {
    init = parse_over(o.init, c, "--init");
    for (const auto& [name, v] : init_pins(init)) mu.set(name, v);
  }
  for (const auto& s : o.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects name=value");
    std::string name = trim(s.substr(0, eq));
    if (!c.find_register(name)) throw UsageError("--set: no register " + name);
    mu.set(name, parse_value(s.substr(eq + 1)));
  }
  for (const auto& m : o.mems) apply_mem_spec(mu, parse_mem_spec(m));
  if (init && !sim.satisfies(mu, init)) throw UsageError("the initial state does not satisfy --init");

  std::string text = render_trace(o, sim.trace_prefix(mu, o.cycles), c.outputs);
  if (!o.filter.empty()) {
    ExprPtr phi = parse_over(o.filter, c, "--filter");
    text += render_trace(o, sim.filtered_trace_prefix(mu, phi, o.cycles, print_expr(phi)), c.outputs);
  }
  emit(o, out, text);
  return kOk;
}

int cmd_compose(const Options& o, std::ostream& out) {
  Design d = load(o);
  const Monitor& m = need_monitor(d, o.monitor, "monitor");
  const Circuit& c = need_circuit(d, o.circuit.empty() ? m.base : o.circuit, "circuit");
  emit(o, out, print_circuit(compose(m, c)));
  return kOk;
}

int cmd_product(const Options& o, std::ostream& out, bool stutter) {
  Design d = load(o);
  const Circuit& c = need_circuit(d, o.circuit, "circuit");
  if (!stutter) {
    emit(o, out, print_circuit(product(c).circuit));
    return kOk;
  }
  if (o.retire.empty()) throw UsageError("--retire is required");
  emit(o, out, print_circuit(stuttering_product(c, parse_over(o.retire, c, "--retire")).circuit));
  return kOk;
}

int report_exit(const VerificationReport& r) {
  if (r.resource_limited) return kResource;
  return r.verdict == Verdict::Satisfied ? kOk : kViolation;
}

int cmd_verify(const Options& o, std::ostream& out, bool four_way) {
  Design d = load(o);
  VerificationProblem p = problem_of(o, d, four_way);
  VerificationReport r;
  if (four_way) {
    const Monitor& contract = p.contract;
    const Circuit& arch = need_circuit(d, o.arch.empty() ? contract.base : o.arch, "arch");
    r = verify_4way(arch, p);
  } else {
    r = verify(p);
  }
  emit(o, out, kv(o) ? format_report_kv(r, o.timing) : format_report_human(r, o.timing));
  return report_exit(r);
}

int cmd_learn(const Options& o, std::ostream& out) {
  Design d = load(o);
  VerificationProblem p = problem_of(o, d, false);
  LearnRun run = learn_problem(p);
  const LearnResult& lr = run.result;
  std::ostringstream os;
  if (kv(o)) {
    os << "candidates=" << run.candidates << "\n"
       << "invariants_learned=" << lr.learned.size() << "\n"
       << "iterations_base=" << lr.stats.iterations_base << "\n"
       << "iterations_inductive=" << lr.stats.iterations_inductive << "\n"
       << "solver_queries=" << lr.stats.solver_queries << "\n"
       << "lookahead=" << p.lookahead << "\n";
    for (size_t i = 0; i < lr.learned.size(); ++i)
      os << "invariant." << i + 1 << "=" << candidate_text(lr.learned[i]) << "\n";
    for (size_t i = 0; i < lr.dropped.size(); ++i)
      os << "dropped." << i + 1 << "=" << candidate_text(lr.dropped[i].candidate) << "\n";
  } else {
    os << run.candidates << " candidates, " << lr.learned.size() << " learned, "
       << lr.stats.solver_queries << " solver queries\n";
    for (const auto& x : lr.learned) os << "  keep  " << candidate_text(x) << "\n";
    for (const auto& x : lr.dropped)
      os << "  drop  " << candidate_text(x.candidate) << "  (" << (x.inductive ? "inductive" : "base")
         << " " << x.iteration << ")\n";
  }
  emit(o, out, os.str());
  return kOk;
}

int cmd_check_isa(const Options& o, std::ostream& out) {
  Design d = load(o);
  const Circuit& impl = need_circuit(d, o.impl, "impl");
  const Circuit& arch = need_circuit(d, o.arch, "arch");
  if (o.retire.empty()) throw UsageError("--retire is required");
  IsaResult r = check_isa_compliance(impl, arch, parse_over(o.retire, impl, "--retire"), bounds_of(o), o.horizon);
  std::ostringstream os;
  if (kv(o)) {
    os << "result=" << (r.pass ? "Pass" : "Violation") << "\n"
       << "states_checked=" << r.states_checked << "\n";
    if (!r.pass)
      os << "condition=" << r.condition << "\ncycle=" << r.cycle << "\nstate=" << r.initial->str()
         << "\nmessage=" << r.message << "\n";
  } else {
    os << (r.pass ? "pass" : "violation") << ": " << r.states_checked << " initial states, horizon "
       << o.horizon << "\n";
    if (!r.pass)
      os << "condition (" << r.condition << ") fails at cycle " << r.cycle << "\n  from " << r.initial->str()
         << "\n  " << r.message << "\n";
  }
  emit(o, out, os.str());
  return r.pass ? kOk : kViolation;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  Design d = load(o);
  const Circuit& impl = need_circuit(d, o.impl, "impl");
  const Monitor& contract = need_monitor(d, o.contract, "contract");
  const Monitor& attacker = need_monitor(d, o.attacker, "attacker");
  auto uarch = uarch_of(o, d, impl, contract);
  OracleResult r;
  if (o.kind == "leak-order") {
    if (o.retire.empty()) throw UsageError("--retire is required");
    r = oracle_leak_order(impl, contract, attacker, uarch, parse_over(o.retire, impl, "--retire"),
                          bounds_of(o), o.horizon);
  } else if (o.kind == "contract") {
    const Circuit& arch = need_circuit(d, o.arch.empty() ? contract.base : o.arch, "arch");
    r = oracle_contract_satisfaction(arch, impl, contract, attacker, uarch, bounds_of(o), o.horizon);
  } else {
    throw UsageError("--kind must be leak-order or contract");
  }
  std::ostringstream os;
  if (kv(o)) {
    os << "result=" << (r.holds ? "Holds" : "Violation") << "\nstates_checked=" << r.states_checked << "\n"
       << as_kv(r.detail);
  } else {
    os << (r.holds ? "holds" : "violation") << " (" << r.states_checked << " initial states, horizon "
       << o.horizon << ")\n"
       << r.detail;
  }
  emit(o, out, os.str());
  return r.holds ? kOk : kViolation;
}

}  // namespace

MemSpec parse_mem_spec(const std::string& text) {
  MemSpec spec;
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--mem expects name:v0,v1,...");
  spec.name = trim(text.substr(0, colon));
  std::string body = text.substr(colon + 1);
  if (auto at = body.find('@'); at != std::string::npos) {
    spec.fill = parse_value(body.substr(at + 1));
    body = body.substr(0, at);
  }
  auto items = split(body, ',');
  for (size_t i = 0; i < items.size(); ++i) {
    std::string item = trim(items[i]);
    if (item != "...") {
      spec.cells.push_back(parse_value(item));
      continue;
    }
    if (spec.cells.size() < 2 || i + 1 >= items.size())
      throw UsageError("'...' needs two cells before it and one after it");
    Value a = spec.cells[spec.cells.size() - 2], b = spec.cells.back();
    Value last = parse_value(items[i + 1]);
    if (!a.defined() || !b.defined() || !last.defined() || b.bits() <= a.bits() || last.bits() < b.bits())
      throw UsageError("'...' only continues increasing progressions");
    uint64_t step = b.bits() - a.bits();
    if ((last.bits() - b.bits()) % step != 0) throw UsageError("'...' does not reach " + last.str());
    for (uint64_t v = b.bits() + step; v < last.bits(); v += step) spec.cells.push_back(Value::of(v));
  }
  return spec;
}

void apply_mem_spec(Valuation& mu, const MemSpec& spec) {
  const Slot* s = mu.layout().find(spec.name);
  if (!s || !s->is_array) throw UsageError("--mem: no memory " + spec.name);
  if (spec.cells.size() > s->cells)
    throw UsageError("--mem: " + spec.name + " has only " + std::to_string(s->cells) + " cells");
  for (uint32_t k = 0; k < s->cells; ++k) {
    if (k < spec.cells.size())
      mu.set(spec.name, k, spec.cells[k]);
    else if (spec.fill)
      mu.set(spec.name, k, *spec.fill);
  }
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leakage-contract verification for uVlog circuits", "uvleak"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("files", o.files, "Input files")->required()->check(CLI::ExistingFile);
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "kv"}));
    s->add_option("--out", o.out_path, "Write the report to this file");
    s->add_option("--seed", o.seed, "Solver seed");
    s->add_flag("--timing", o.timing, "Report elapsed time");
  };
  auto bounds = [&](CLI::App* s) {
    s->add_option("--horizon", o.horizon, "Cycles simulated per run")->check(CLI::Range(1, 4096));
    s->add_option("--value-bits", o.value_bits, "Registers range over 2^N values")->check(CLI::Range(1, 32));
    s->add_option("--mem-cells", o.mem_cells, "Memory cells that vary; the rest are 0");
    s->add_option("--values", o.values, "Explicit values, name:v1,v2,...");
    s->add_flag("--bottom", o.bottom, "Include bot in every domain");
    s->add_option("--max-states", o.max_states, "Enumeration limit");
  };
  auto problem = [&](CLI::App* s, bool arch) {
    s->add_option("--impl", o.impl, "Implementation circuit")->required();
    s->add_option("--contract", o.contract, "Leakage monitor")->required();
    s->add_option("--attacker", o.attacker, "Attacker monitor")->required();
    s->add_option("--retire", o.retire, "Retirement predicate")->required();
    s->add_option("--b", o.lookahead, "Lookahead")->check(CLI::Range(1, 256));
    s->add_option("--uarch", o.uarch, "Comma-separated uarch registers")
        ->each([&](const std::string&) { o.uarch_given = true; });
    s->add_option("--candidates", o.candidates, "Candidate blocks to use");
    s->add_flag("--no-auto", o.no_auto, "Only user candidates");
    s->add_option("--conflicts", o.conflicts, "Conflict budget per solver call");
    s->add_option("--time-limit", o.time_limit, "Seconds per solver call");
    s->add_flag("--bottom", o.bottom, "Let initial registers and memory hold bot");
    if (arch) s->add_option("--arch", o.arch, "Architecture circuit (default: the contract's base)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check well-formedness");
  common(validate_cmd);
  validate_cmd->add_option("--circuit", o.circuit, "Only this circuit");

  auto* sim_cmd = app.add_subcommand("simulate", "Print output traces");
  common(sim_cmd);
  sim_cmd->add_option("--circuit", o.circuit, "Circuit to run");
  sim_cmd->add_option("--monitor", o.monitor, "Compose this monitor first");
  sim_cmd->add_option("--init", o.init, "Initial predicate; x == c conjuncts set registers");
  sim_cmd->add_option("--set", o.sets, "Register value, name=v");
  sim_cmd->add_option("--mem", o.mems, "Memory cells, name:v0,v1,...[@fill]");
  sim_cmd->add_option("--cycles", o.cycles, "Prefix length")->check(CLI::Range(1, 100000));
  sim_cmd->add_option("--filter", o.filter, "Also print the trace filtered by this predicate");

  auto* compose_cmd = app.add_subcommand("compose", "Print M[C]");
  common(compose_cmd);
  compose_cmd->add_option("--monitor", o.monitor, "Monitor")->required();
  compose_cmd->add_option("--circuit", o.circuit, "Monitored circuit (default: the monitor's base)");

  auto* product_cmd = app.add_subcommand("product", "Print C x C");
  common(product_cmd);
  product_cmd->add_option("--circuit", o.circuit, "Circuit");

  auto* stutter_cmd = app.add_subcommand("stutter", "Print the stuttering product");
  common(stutter_cmd);
  stutter_cmd->add_option("--circuit", o.circuit, "Circuit");
  stutter_cmd->add_option("--retire", o.retire, "Retirement predicate")->required();

  auto* learn_cmd = app.add_subcommand("learn-inv", "Learn relational invariants");
  common(learn_cmd);
  problem(learn_cmd, false);

  auto* verify_cmd = app.add_subcommand("verify", "Verify contract satisfaction");
  common(verify_cmd);
  problem(verify_cmd, false);

  auto* verify4_cmd = app.add_subcommand("verify-4way", "Verify with the 4-copy construction");
  common(verify4_cmd);
  problem(verify4_cmd, true);

  auto* isa_cmd = app.add_subcommand("check-isa", "Bounded ISA-compliance test");
  common(isa_cmd);
  bounds(isa_cmd);
  isa_cmd->add_option("--impl", o.impl, "Implementation")->required();
  isa_cmd->add_option("--arch", o.arch, "Architecture")->required();
  isa_cmd->add_option("--retire", o.retire, "Retirement predicate")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive pair search");
  common(oracle_cmd);
  bounds(oracle_cmd);
  oracle_cmd->add_option("--kind", o.kind, "leak-order or contract")
      ->required()
      ->check(CLI::IsMember({"leak-order", "contract"}));
  oracle_cmd->add_option("--impl", o.impl, "Implementation")->required();
  oracle_cmd->add_option("--arch", o.arch, "Architecture (default: the contract's base)");
  oracle_cmd->add_option("--contract", o.contract, "Leakage monitor")->required();
  oracle_cmd->add_option("--attacker", o.attacker, "Attacker monitor")->required();
  oracle_cmd->add_option("--retire", o.retire, "Retirement predicate");
  oracle_cmd->add_option("--uarch", o.uarch, "Comma-separated uarch registers")
      ->each([&](const std::string&) { o.uarch_given = true; });

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*sim_cmd) return cmd_simulate(o, out);
    if (*compose_cmd) return cmd_compose(o, out);
    if (*product_cmd) return cmd_product(o, out, false);
    if (*stutter_cmd) return cmd_product(o, out, true);
    if (*learn_cmd) return cmd_learn(o, out);
    if (*verify_cmd) return cmd_verify(o, out, false);
    if (*verify4_cmd) return cmd_verify(o, out, true);
    if (*isa_cmd) return cmd_check_isa(o, out);
    if (*oracle_cmd) return cmd_oracle(o, out);
  } catch (const ResourceLimit& e) {
    err << "uvleak: " << e.what() << "\n";
    return kResource;
  } catch (const DomainTooLarge& e) {
    err << "uvleak: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "uvleak: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace uvleak::cli
