#include <map>
#include <sstream>

#include "uvleak/engine.hpp"
#include "uvleak/error.hpp"
#include "uvleak/textio.hpp"

namespace uvleak {

namespace {

using Key = std::vector<uint64_t>;

uint64_t code(const Value& v) { return v.defined() ? v.bits() : ~uint64_t{0}; }

void append(Key& k, const std::vector<Value>& vs) {
  for (const auto& v : vs) k.push_back(code(v));
}

// Separates records so that sequences of different lengths never collide.
constexpr uint64_t kSep = ~uint64_t{0} - 1;

std::vector<Value> uarch_cells(const Valuation& mu, const std::set<std::string>& uarch) {
  std::vector<Value> out;
  for (const auto& s : mu.layout().slots())
    if (uarch.count(s.name))
      for (uint32_t k = 0; k < s.cells; ++k) out.push_back(mu.cells()[s.offset + k]);
  return out;
}

struct Run {
  Key hypothesis;
  Key attacker;
  std::vector<std::vector<Value>> contract_rows, attacker_rows;
};

std::string render_rows(const std::vector<std::vector<Value>>& rows) {
  std::string out;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i) out += "·";
    if (rows[i].size() == 1) {
      out += rows[i][0].str();
    } else {
      out += "(";
      for (size_t j = 0; j < rows[i].size(); ++j) out += (j ? "," : "") + rows[i][j].str();
      out += ")";
    }
  }
  return out;
}

template <class RunFn>
OracleResult pair_search(const Simulator& impl_sim, const std::set<std::string>& uarch,
                         const DomainBounds& bounds, RunFn&& run_of) {
  const Circuit& impl = impl_sim.circuit();
  OracleResult res;
  std::map<Key, std::pair<Valuation, Run>> seen;
  enumerate_states(impl_sim.layout(), bounds, init_pins(impl.init), [&](const Valuation& mu) {
    if (impl.init && !impl_sim.satisfies(mu, impl.init)) return true;
    ++res.states_checked;
    Run r = run_of(mu);
    Key k;
    append(k, uarch_cells(mu, uarch));
    k.push_back(kSep);
    k.insert(k.end(), r.hypothesis.begin(), r.hypothesis.end());
    auto it = seen.find(k);
    if (it == seen.end()) {
      seen.emplace(std::move(k), std::make_pair(mu, std::move(r)));
      return true;
    }
    if (it->second.second.attacker == r.attacker) return true;
    res.holds = false;
    res.pair = std::make_pair(it->second.first, mu);
    std::ostringstream os;
    os << "state.a: " << it->second.first.str() << "\n"
       << "state.b: " << mu.str() << "\n"
       << "contract.a: " << render_rows(it->second.second.contract_rows) << "\n"
       << "contract.b: " << render_rows(r.contract_rows) << "\n"
       << "attacker.a: " << render_rows(it->second.second.attacker_rows) << "\n"
       << "attacker.b: " << render_rows(r.attacker_rows) << "\n";
    res.detail = os.str();
    return false;
  });
  return res;
}

void record(Key& key, std::vector<std::vector<Value>>& rows, std::vector<Value> vs) {
  append(key, vs);
  key.push_back(kSep);
  rows.push_back(std::move(vs));
}

}  // namespace

DomainBounds oracle_bounds() {
  DomainBounds b;
  b.value_bits = 2;
  b.memory_cells = 4;
  b.include_bottom = false;
  return b;
}

OracleResult oracle_leak_order(const Circuit& impl, const Monitor& contract, const Monitor& attacker,
                               const std::set<std::string>& uarch, const ExprPtr& retire,
                               const DomainBounds& bounds, size_t horizon) {
  Simulator impl_sim(impl);
  Simulator lc(compose(contract, impl));
  Simulator ac(compose(attacker, impl));
  auto phi = lc.compile(retire);
  return pair_search(impl_sim, uarch, bounds, [&](const Valuation& mu) {
    Run r;
    Valuation lmu = mu.reshaped(lc.layout());
    Valuation amu = mu.reshaped(ac.layout());
    for (size_t i = 0; i < horizon; ++i) {
      if (i) {
        lmu = lc.step(lmu);
        amu = ac.step(amu);
      }
      if (lc.satisfies(lmu, phi))
        record(r.hypothesis, r.contract_rows, lc.outputs(lmu));
      record(r.attacker, r.attacker_rows, ac.outputs(amu));
    }
    return r;
  });
}

OracleResult oracle_contract_satisfaction(const Circuit& arch, const Circuit& impl,
                                          const Monitor& contract, const Monitor& attacker,
                                          const std::set<std::string>& uarch,
                                          const DomainBounds& bounds, size_t horizon) {
  Simulator impl_sim(impl);
  Simulator lc(compose(contract, arch));
  Simulator ac(compose(attacker, impl));
  for (const auto& r : arch.registers)
    if (!impl.find_register(r.name))
      throw PreconditionError(arch.name + " register " + r.name + " is not declared in " + impl.name);
  return pair_search(impl_sim, uarch, bounds, [&](const Valuation& mu) {
    Run r;
    Valuation lmu = mu.reshaped(lc.layout());
    Valuation amu = mu.reshaped(ac.layout());
    for (size_t i = 0; i < horizon; ++i) {
      if (i) {
        lmu = lc.step(lmu);
        amu = ac.step(amu);
      }
      record(r.hypothesis, r.contract_rows, lc.outputs(lmu));
      record(r.attacker, r.attacker_rows, ac.outputs(amu));
    }
    return r;
  });
}

IsaResult check_isa_compliance(const Circuit& impl, const Circuit& arch, const ExprPtr& retire,
                               const DomainBounds& bounds, size_t horizon) {
  Simulator si(impl), sa(arch);
  for (const auto& r : arch.registers)
    if (!impl.find_register(r.name))
      throw PreconditionError(arch.name + " register " + r.name + " is not declared in " + impl.name);
  auto phi = si.compile(retire);
  const auto& arch_layout = sa.layout();
  IsaResult res;
  enumerate_states(si.layout(), bounds, init_pins(impl.init), [&](const Valuation& mu) {
    if (impl.init && !si.satisfies(mu, impl.init)) return true;
    ++res.states_checked;
    auto states = si.states(mu, horizon);
    std::vector<size_t> retired;
    for (size_t i = 0; i < states.size(); ++i)
      if (si.satisfies(states[i], phi)) retired.push_back(i);
    auto arch_states = sa.states(mu.reshaped(arch_layout), retired.size());
    auto fail = [&](int cond, size_t cycle, std::string msg) {
      res.pass = false;
      res.condition = cond;
      res.initial = mu;
      res.cycle = cycle;
      res.message = std::move(msg);
      return false;
    };
    for (size_t k = 0; k < retired.size(); ++k) {
      Valuation got = states[retired[k]].reshaped(arch_layout);
      if (!(got == arch_states[k]))
        return fail(1, retired[k],
                    "retirement " + std::to_string(k) + " at cycle " + std::to_string(retired[k]) +
                        " has " + got.str() + " but " + arch.name + " step " + std::to_string(k) +
                        " has " + arch_states[k].str());
    }
    for (size_t i = 1; i < states.size(); ++i) {
      if (si.satisfies(states[i], phi)) continue;
      Valuation now = states[i].reshaped(arch_layout), before = states[i - 1].reshaped(arch_layout);
      if (!(now == before))
        return fail(2, i,
                    "architectural state changes at non-retiring cycle " + std::to_string(i) + ": " +
                        before.str() + " -> " + now.str());
    }
    return true;
  });
  return res;
}

}  // namespace uvleak
