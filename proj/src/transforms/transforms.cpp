#include "uvleak/transforms.hpp"

#include <algorithm>

#include "uvleak/error.hpp"

namespace uvleak {

namespace {

// Monitor registers declared without a width take the base width.
Circuit resolved_body(const Monitor& m, const Circuit& c) {
  Circuit body = m.body;
  body.width = c.width;
  for (auto& r : body.registers)
    if (r.width == 0) r.width = c.width;
  return body;
}

void collect_expr_registers(const Circuit& scope, const ExprPtr& e, std::set<std::string>& regs,
                            std::set<std::string>& seen_wires) {
  if (!e) return;
  std::set<std::string> ids;
  collect_identifiers(*e, ids);
  for (const auto& id : ids) {
    if (scope.find_register(id)) {
      regs.insert(id);
    } else if (const Wire* w = scope.find_wire(id); w && seen_wires.insert(id).second) {
      collect_expr_registers(scope, w->expr, regs, seen_wires);
    }
  }
}

ExprPtr conj(ExprPtr a, ExprPtr b) {
  if (!a) return b;
  if (!b) return a;
  return build::land(std::move(a), std::move(b));
}

Circuit merge(const Circuit& base, const Circuit& body) {
  Circuit out = base;
  out.registers.insert(out.registers.end(), body.registers.begin(), body.registers.end());
  out.wires.insert(out.wires.end(), body.wires.begin(), body.wires.end());
  out.assignments.insert(out.assignments.end(), body.assignments.begin(), body.assignments.end());
  return out;
}

}  // namespace

MonitorCheck check_monitor(const Monitor& m, const Circuit& c) {
  MonitorCheck res;
  Circuit body = resolved_body(m, c);
  auto error = [&](std::string loc, std::string msg) {
    res.diagnostics.push_back({Severity::Error, std::move(loc), std::move(msg)});
  };

  bool clash = false;
  for (const auto& r : body.registers)
    if (c.declares(r.name)) {
      error("reg " + r.name, "monitor declares " + r.name + " which " + c.name + " already declares");
      clash = true;
    }
  for (const auto& w : body.wires)
    if (c.declares(w.name)) {
      error("wire " + w.name, "monitor declares " + w.name + " which " + c.name + " already declares");
      clash = true;
    }

  Circuit merged = merge(c, body);
  merged.outputs = body.outputs;
  merged.init = c.init;
  Diagnostics d = validate(merged);
  for (auto& x : d) res.diagnostics.push_back(x);

  std::set<std::string> writes_m;
  for (const auto& a : body.assignments) writes_m.insert(a.target);
  auto rw_c = read_write_sets(c);
  auto vars_c = vars(c);
  bool overlap = false;
  for (const auto& x : writes_m) {
    if (rw_c.writes.count(x)) {
      error("assign " + x, "monitor writes " + x + " which " + c.name + " also writes");
      overlap = true;
    } else if (vars_c.count(x) || c.find_register(x)) {
      error("assign " + x, "monitor writes " + x + " which " + c.name + " uses");
      overlap = true;
    }
  }
  res.is_monitoring = !clash && !overlap && !has_errors(d);

  std::set<std::string> reads_m, seen;
  for (const auto& w : body.wires) collect_expr_registers(merged, w.expr, reads_m, seen);
  for (const auto& a : body.assignments) {
    collect_expr_registers(merged, a.value, reads_m, seen);
    collect_expr_registers(merged, a.index, reads_m, seen);
    collect_expr_registers(merged, a.enable, reads_m, seen);
  }
  for (const auto& o : body.outputs) collect_expr_registers(merged, Expr::ref(o), reads_m, seen);
  bool reads_ok = true;
  for (const auto& r : reads_m)
    if (!vars_c.count(r)) {
      reads_ok = false;
      res.diagnostics.push_back({Severity::Warning, "reg " + r,
                                 "monitor reads " + r + " outside vars(" + c.name + ")"});
    }
  if (!body.assignments.empty())
    res.diagnostics.push_back({Severity::Warning, "monitor " + m.name, "monitor has its own assignments"});
  res.is_combinatorial = res.is_monitoring && reads_ok && body.assignments.empty();
  return res;
}

Circuit compose(const Monitor& m, const Circuit& c) {
  MonitorCheck chk = check_monitor(m, c);
  if (!chk.is_monitoring)
    throw PreconditionError(m.name + " is not a monitoring circuit for " + c.name + ":\n" +
                            format_diagnostics(chk.diagnostics));
  Circuit out = merge(c, resolved_body(m, c));
  out.name = m.name + "_of_" + c.name;
  out.outputs = m.body.outputs;
  return out;
}

Circuit compose_all(const std::vector<const Monitor*>& ms, const Circuit& c) {
  Circuit out = c;
  for (const Monitor* m : ms) {
    MonitorCheck chk = check_monitor(*m, c);
    if (!chk.is_monitoring)
      throw PreconditionError(m->name + " is not a monitoring circuit for " + c.name + ":\n" +
                              format_diagnostics(chk.diagnostics));
    Circuit body = resolved_body(*m, c);
    for (const auto& r : body.registers)
      if (out.declares(r.name)) throw PreconditionError("monitors clash on " + r.name);
    for (const auto& w : body.wires)
      if (out.declares(w.name)) throw PreconditionError("monitors clash on " + w.name);
    out = merge(out, body);
    for (const auto& o : body.outputs)
      if (std::find(out.outputs.begin(), out.outputs.end(), o) == out.outputs.end())
        out.outputs.push_back(o);
  }
  return out;
}

std::string tag_name(const std::string& name, unsigned copy) {
  return name + "." + std::to_string(copy);
}

ExprPtr tag(const ExprPtr& e, unsigned copy) {
  return rename_identifiers(e, [copy](const std::string& n) { return tag_name(n, copy); });
}

Circuit tag_circuit(const Circuit& c, unsigned copy) {
  Circuit out;
  out.name = c.name + "_" + std::to_string(copy);
  out.width = c.width;
  for (auto r : c.registers) {
    r.name = tag_name(r.name, copy);
    out.registers.push_back(std::move(r));
  }
  for (const auto& w : c.wires) out.wires.push_back({tag_name(w.name, copy), tag(w.expr, copy)});
  for (const auto& a : c.assignments)
    out.assignments.push_back(
        {tag_name(a.target, copy), tag(a.index, copy), tag(a.value, copy), tag(a.enable, copy)});
  for (const auto& o : c.outputs) out.outputs.push_back(tag_name(o, copy));
  out.init = tag(c.init, copy);
  return out;
}

Circuit tagged_union(const std::string& name, const std::vector<const Circuit*>& parts,
                     const std::vector<unsigned>& copies) {
  if (parts.size() != copies.size() || parts.empty())
    throw PreconditionError("tagged_union needs one copy tag per part");
  Circuit out;
  out.name = name;
  out.width = parts.front()->width;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i]->width != out.width) throw PreconditionError("tagged_union over mixed widths");
    Circuit t = tag_circuit(*parts[i], copies[i]);
    for (const auto& r : t.registers)
      if (out.declares(r.name)) throw PreconditionError("duplicate copy tag " + r.name);
    out.registers.insert(out.registers.end(), t.registers.begin(), t.registers.end());
    out.wires.insert(out.wires.end(), t.wires.begin(), t.wires.end());
    out.assignments.insert(out.assignments.end(), t.assignments.begin(), t.assignments.end());
    out.outputs.insert(out.outputs.end(), t.outputs.begin(), t.outputs.end());
    out.init = conj(out.init, t.init);
  }
  return out;
}

PairedCircuit product(const Circuit& c) {
  PairedCircuit p;
  p.circuit = tagged_union(c.name + "_x_" + c.name, {&c, &c}, {1, 2});
  return p;
}

PairedCircuit stuttering_product(const Circuit& c, const ExprPtr& phi) {
  if (!phi) throw PreconditionError("stuttering product needs a predicate");
  PairedCircuit p = product(c);
  p.circuit.name = c.name + "_stutter_" + c.name;
  p.kind = PairKind::Stuttering;
  p.phi = phi;
  // Copy k stalls while it is ready to retire and the other copy is not.
  ExprPtr stall[3];
  stall[1] = build::land(tag(phi, 1), build::lnot(tag(phi, 2)));
  stall[2] = build::land(tag(phi, 2), build::lnot(tag(phi, 1)));
  for (auto& a : p.circuit.assignments) {
    unsigned copy = a.target.back() == '1' ? 1 : 2;
    if (a.index) {
      ExprPtr go = build::lnot(stall[copy]);
      a.enable = a.enable ? build::land(go, a.enable) : go;
    } else {
      a.value = build::ite(stall[copy], Expr::ref(a.target), a.value);
    }
  }
  return p;
}

}  // namespace uvleak
