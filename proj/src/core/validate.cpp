#include "uvleak/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "uvleak/value.hpp"

namespace uvleak {

bool has_errors(const Diagnostics& d) {
  for (const auto& x : d)
    if (x.severity == Severity::Error) return true;
  return false;
}

std::string format_diagnostics(const Diagnostics& d) {
  std::ostringstream os;
  for (const auto& x : d) {
    os << (x.severity == Severity::Error ? "error" : "warning");
    if (!x.location.empty()) os << " [" << x.location << "]";
    os << ": " << x.message << "\n";
  }
  return os.str();
}

namespace {

class Checker {
 public:
  explicit Checker(const Circuit& c) : c_(c) {}

  Diagnostics run() {
    check_header();
    check_declarations();
    for (const auto& w : c_.wires) check_expr(w.expr, "wire " + w.name);
    check_assignments();
    check_outputs();
    if (c_.init) check_expr(c_.init, "init");
    check_cycles();
    return std::move(out_);
  }

 private:
  void error(std::string loc, std::string msg) {
    out_.push_back({Severity::Error, std::move(loc), std::move(msg)});
  }

  void check_header() {
    if (c_.width < 1 || c_.width > kMaxWidth)
      error("circuit " + c_.name, "width " + std::to_string(c_.width) + " outside 1.." +
                                      std::to_string(kMaxWidth));
  }

  void check_declarations() {
    std::set<std::string> seen;
    for (const auto& r : c_.registers) {
      std::string loc = "reg " + r.name;
      if (!seen.insert(r.name).second) error(loc, "duplicate declaration " + r.name);
      if (r.width < 1 || r.width > c_.width)
        error(loc, "register " + r.name + " width " + std::to_string(r.width) +
                       " outside 1.." + std::to_string(c_.width));
      if (r.length && *r.length < 1) error(loc, "array " + r.name + " has length 0");
      if (r.reset && (*r.reset & ~width_mask(r.width)) != 0)
        error(loc, "reset value of " + r.name + " does not fit its width");
    }
    for (const auto& w : c_.wires) {
      std::string loc = "wire " + w.name;
      if (!seen.insert(w.name).second) error(loc, "duplicate declaration " + w.name);
      if (!w.expr) error(loc, "wire " + w.name + " has no definition");
    }
  }

  void check_expr(const ExprPtr& e, const std::string& loc) {
    if (!e) {
      error(loc, "missing expression");
      return;
    }
    switch (e->kind()) {
      case ExprKind::Ref: {
        const auto* r = c_.find_register(e->name());
        if (r && r->is_array())
          error(loc, "array " + e->name() + " used as a scalar");
        else if (!r && !c_.find_wire(e->name()))
          error(loc, "undeclared identifier " + e->name());
        break;
      }
      case ExprKind::ArrayRead: {
        const auto* r = c_.find_register(e->name());
        if (!r) {
          if (c_.find_wire(e->name()))
            error(loc, "wire " + e->name() + " indexed as an array");
          else
            error(loc, "undeclared identifier " + e->name());
        } else if (!r->is_array()) {
          error(loc, "scalar " + e->name() + " indexed as an array");
        }
        break;
      }
      default:
        break;
    }
    for (const auto& op : e->operands()) check_expr(op, loc);
  }

  void check_assignments() {
    std::set<std::string> targets;
    for (const auto& a : c_.assignments) {
      std::string loc = "assign " + a.target;
      if (!targets.insert(a.target).second)
        error(loc, "duplicate left-hand side " + a.target);
      const auto* r = c_.find_register(a.target);
      if (!r) {
        if (c_.find_wire(a.target))
          error(loc, "assignment to wire " + a.target);
        else
          error(loc, "assignment to undeclared register " + a.target);
      } else if (r->is_array() && !a.index) {
        error(loc, "array " + a.target + " assigned without an index");
      } else if (!r->is_array() && a.index) {
        error(loc, "scalar " + a.target + " assigned with an index");
      }
      check_expr(a.value, loc);
      if (a.index) check_expr(a.index, loc);
      if (a.enable) check_expr(a.enable, loc);
    }
  }

  void check_outputs() {
    std::set<std::string> seen;
    for (const auto& o : c_.outputs) {
      std::string loc = "output " + o;
      if (!seen.insert(o).second) error(loc, "duplicate output " + o);
      const auto* r = c_.find_register(o);
      if (r && r->is_array())
        error(loc, "array " + o + " cannot be an output");
      else if (!r && !c_.find_wire(o))
        error(loc, "output " + o + " is not declared");
    }
  }

  void check_cycles() {
    std::map<std::string, std::set<std::string>> deps;
    for (const auto& w : c_.wires) {
      std::set<std::string> ids;
      if (w.expr) collect_identifiers(*w.expr, ids);
      for (const auto& id : ids)
        if (c_.find_wire(id)) deps[w.name].insert(id);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<std::string, int> state;
    std::vector<std::string> stack;
    std::set<std::string> reported;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
      state[n] = 1;
      stack.push_back(n);
      for (const auto& d : deps[n]) {
        if (state[d] == 1) {
          auto it = std::find(stack.begin(), stack.end(), d);
          std::string path;
          for (auto p = it; p != stack.end(); ++p) path += *p + "→";
          path += d;
          if (reported.insert(d).second)
            error("wire " + d, "combinational cycle " + path);
        } else if (state[d] == 0) {
          visit(d);
        }
      }
      stack.pop_back();
      state[n] = 2;
    };
    for (const auto& w : c_.wires)
      if (state[w.name] == 0) visit(w.name);
  }

  const Circuit& c_;
  Diagnostics out_;
};

void collect_registers(const Circuit& c, const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  std::set<std::string> ids;
  collect_identifiers(*e, ids);
  for (const auto& id : ids)
    if (c.find_register(id)) out.insert(id);
}

}  // namespace

Diagnostics validate(const Circuit& c) { return Checker(c).run(); }

ReadWriteSets read_write_sets(const Circuit& c) {
  ReadWriteSets rw;
  for (const auto& w : c.wires) collect_registers(c, w.expr, rw.reads);
  for (const auto& a : c.assignments) {
    collect_registers(c, a.value, rw.reads);
    collect_registers(c, a.index, rw.reads);
    collect_registers(c, a.enable, rw.reads);
    rw.writes.insert(a.target);
  }
  return rw;
}

std::set<std::string> vars(const Circuit& c) {
  auto rw = read_write_sets(c);
  rw.reads.insert(rw.writes.begin(), rw.writes.end());
  return rw.reads;
}

Diagnostics check_partition(const Circuit& c, const std::set<std::string>& arch,
                            const std::set<std::string>& uarch) {
  Diagnostics out;
  for (const auto& r : arch)
    if (uarch.count(r))
      out.push_back({Severity::Error, "reg " + r, r + " is both architectural and microarchitectural"});
  for (const auto& r : c.registers)
    if (!arch.count(r.name) && !uarch.count(r.name))
      out.push_back({Severity::Error, "reg " + r.name, r.name + " is in neither ARCH nor uARCH"});
  for (const auto* s : {&arch, &uarch})
    for (const auto& r : *s)
      if (!c.find_register(r))
        out.push_back({Severity::Error, "reg " + r, r + " is not a declared register"});
  return out;
}

}  // namespace uvleak
