#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "uvleak/sat.hpp"

namespace uvleak {

namespace {

// Internal literal: 2*var + negated, var 0-based.
inline int mk(Lit l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
inline int var_of(int p) { return p >> 1; }
inline int neg(int p) { return p ^ 1; }

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

struct Solver::Impl {
  struct Clause {
    std::vector<int> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    int cref;
    int blocker;
  };

  SolverOptions opts;
  SolverStats stats;
  bool ok = true;

  std::vector<int8_t> assigns;  // per var: 0 undef, 1 true, -1 false
  std::vector<int> level;
  std::vector<int> reason;
  std::vector<double> activity;
  std::vector<char> phase;
  std::vector<char> seen;
  std::vector<Clause> clauses;
  std::vector<int> learnts;
  std::vector<std::vector<Watcher>> watches;
  std::vector<int> trail;
  std::vector<int> trail_lim;
  size_t qhead = 0;
  std::vector<char> model;

  std::vector<int> heap;
  std::vector<int> heap_pos;

  double var_inc = 1.0;
  double cla_inc = 1.0;
  double max_learnts = 0;
  uint64_t rng = 0;

  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  uint64_t conflict_limit = 0;

  // --- heap ordered by activity ---------------------------------------------

  bool before(int a, int b) const {
    return activity[a] > activity[b] || (activity[a] == activity[b] && a < b);
  }
  void heap_up(size_t i) {
    int v = heap[i];
    while (i > 0) {
      size_t parent = (i - 1) / 2;
      if (!before(v, heap[parent])) break;
      heap[i] = heap[parent];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = parent;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_down(size_t i) {
    int v = heap[i];
    for (;;) {
      size_t child = 2 * i + 1;
      if (child >= heap.size()) break;
      if (child + 1 < heap.size() && before(heap[child + 1], heap[child])) ++child;
      if (!before(heap[child], v)) break;
      heap[i] = heap[child];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = child;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_insert(int v) {
    if (heap_pos[v] >= 0) return;
    heap.push_back(v);
    heap_pos[v] = static_cast<int>(heap.size() - 1);
    heap_up(heap.size() - 1);
  }
  int heap_pop() {
    int v = heap.front();
    heap_pos[v] = -1;
    int last = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap[0] = last;
      heap_pos[last] = 0;
      heap_down(0);
    }
    return v;
  }

  // --- basics ----------------------------------------------------------------

  int nvars() const { return static_cast<int>(assigns.size()); }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }
  int8_t value(int p) const {
    int8_t a = assigns[var_of(p)];
    return (p & 1) ? static_cast<int8_t>(-a) : a;
  }

  uint64_t next_random() {
    rng ^= rng << 13;
    rng ^= rng >> 7;
    rng ^= rng << 17;
    return rng;
  }

  int new_var() {
    int v = nvars();
    assigns.push_back(0);
    level.push_back(0);
    reason.push_back(-1);
    double act = 0;
    if (opts.seed != 0) act = static_cast<double>(next_random() % 1000) * 1e-7;
    activity.push_back(act);
    phase.push_back(0);
    seen.push_back(0);
    watches.emplace_back();
    watches.emplace_back();
    heap_pos.push_back(-1);
    heap_insert(v);
    return v;
  }

  void enqueue(int p, int from) {
    int v = var_of(p);
    assigns[v] = (p & 1) ? -1 : 1;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(p);
  }

  void attach(int cref) {
    const Clause& c = clauses[cref];
    watches[neg(c.lits[0])].push_back({cref, c.lits[1]});
    watches[neg(c.lits[1])].push_back({cref, c.lits[0]});
  }

  bool add_clause(std::vector<int> ps) {
    if (!ok) return false;
    std::sort(ps.begin(), ps.end());
    std::vector<int> out;
    int prev = -1;
    for (int p : ps) {
      if (value(p) == 1 || p == neg(prev)) return true;
      if (value(p) == -1 || p == prev) continue;
      out.push_back(p);
      prev = p;
    }
    if (out.empty()) return ok = false;
    if (out.size() == 1) {
      enqueue(out[0], -1);
      return ok = (propagate() == -1);
    }
    clauses.push_back({std::move(out)});
    attach(static_cast<int>(clauses.size() - 1));
    return true;
  }

  int propagate() {
    int confl = -1;
    while (qhead < trail.size()) {
      int p = trail[qhead++];
      int false_lit = neg(p);
      auto& ws = watches[p];
      size_t i = 0, j = 0;
      ++stats.propagations;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = clauses[w.cref];
        if (c.deleted) {
          ++i;
          continue;
        }
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        ++i;
        int first = c.lits[0];
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != -1) {
            std::swap(c.lits[1], c.lits[k]);
            watches[neg(c.lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == -1) {
          confl = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != -1) break;
    }
    return confl;
  }

  void bump_var(int v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_pos[v] >= 0) heap_up(static_cast<size_t>(heap_pos[v]));
  }

  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc) > 1e20) {
      for (int cr : learnts) clauses[cr].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  void analyze(int confl, std::vector<int>& out, int& bt_level) {
    int path = 0;
    int p = -1;
    out.assign(1, -1);
    int index = static_cast<int>(trail.size()) - 1;
    do {
      Clause& c = clauses[confl];
      if (c.learnt) bump_clause(c);
      for (size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
        int q = c.lits[j];
        int v = var_of(q);
        if (!seen[v] && level[v] > 0) {
          bump_var(v);
          seen[v] = 1;
          if (level[v] >= decision_level())
            ++path;
          else
            out.push_back(q);
        }
      }
      while (!seen[var_of(trail[index--])]) {
      }
      p = trail[index + 1];
      confl = reason[var_of(p)];
      seen[var_of(p)] = 0;
      --path;
    } while (path > 0);
    out[0] = neg(p);

    // Drop literals implied by the rest of the clause.
    std::vector<int> all(out.begin(), out.end());
    size_t keep = 1;
    for (size_t i = 1; i < out.size(); ++i) {
      int r = reason[var_of(out[i])];
      bool redundant = r != -1;
      if (redundant) {
        const Clause& c = clauses[r];
        for (size_t k = 1; k < c.lits.size(); ++k) {
          int v = var_of(c.lits[k]);
          if (!seen[v] && level[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out[keep++] = out[i];
    }
    out.resize(keep);
    for (int q : all) seen[var_of(q)] = 0;

    bt_level = 0;
    if (out.size() > 1) {
      size_t max_i = 1;
      for (size_t i = 2; i < out.size(); ++i)
        if (level[var_of(out[i])] > level[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      bt_level = level[var_of(out[1])];
    }
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (int c = static_cast<int>(trail.size()) - 1; c >= trail_lim[lvl]; --c) {
      int v = var_of(trail[c]);
      assigns[v] = 0;
      reason[v] = -1;
      phase[v] = static_cast<char>((trail[c] & 1) == 0);
      heap_insert(v);
    }
    qhead = static_cast<size_t>(trail_lim[lvl]);
    trail.resize(qhead);
    trail_lim.resize(lvl);
  }

  int pick_branch() {
    while (!heap.empty()) {
      int v = heap_pop();
      if (assigns[v] == 0) return phase[v] ? 2 * v : 2 * v + 1;
    }
    return -1;
  }

  bool locked(int cref) const {
    const Clause& c = clauses[cref];
    int v = var_of(c.lits[0]);
    return reason[v] == cref && value(c.lits[0]) == 1;
  }

  void reduce_db() {
    std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
      const Clause& x = clauses[a];
      const Clause& y = clauses[b];
      if (x.lits.size() == 2 || y.lits.size() == 2) return x.lits.size() > 2 && y.lits.size() == 2;
      return x.activity < y.activity;
    });
    size_t half = learnts.size() / 2;
    std::vector<int> kept;
    for (size_t i = 0; i < learnts.size(); ++i) {
      Clause& c = clauses[learnts[i]];
      if (i < half && c.lits.size() > 2 && !locked(learnts[i])) {
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        ++stats.learnts_removed;
      } else {
        kept.push_back(learnts[i]);
      }
    }
    learnts = std::move(kept);
  }

  bool out_of_budget() const {
    if (conflict_limit && stats.conflicts >= conflict_limit) return true;
    if (has_deadline && (stats.conflicts & 63) == 0 && std::chrono::steady_clock::now() > deadline)
      return true;
    return false;
  }

  // Returns 1 sat, -1 unsat, 0 restart, 2 budget exhausted.
  int search(uint64_t nof_conflicts, const std::vector<int>& assumptions) {
    uint64_t conflicts_here = 0;
    std::vector<int> learnt;
    for (;;) {
      int confl = propagate();
      if (confl != -1) {
        ++stats.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok = false;
          return -1;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          clauses.push_back({learnt});
          int cref = static_cast<int>(clauses.size() - 1);
          clauses[cref].learnt = true;
          learnts.push_back(cref);
          attach(cref);
          bump_clause(clauses[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;
        if (out_of_budget()) return 2;
        continue;
      }
      if (conflicts_here >= nof_conflicts) {
        cancel_until(0);
        return 0;
      }
      if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts)
        reduce_db();
      int next = -1;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        int p = assumptions[decision_level()];
        if (value(p) == 1) {
          trail_lim.push_back(static_cast<int>(trail.size()));
        } else if (value(p) == -1) {
          return -1;
        } else {
          next = p;
          break;
        }
      }
      if (next == -1) {
        ++stats.decisions;
        next = pick_branch();
        if (next == -1) return 1;
      }
      trail_lim.push_back(static_cast<int>(trail.size()));
      enqueue(next, -1);
    }
  }

  SatResult solve(std::span<const Lit> assumps) {
    model.clear();
    if (!ok) return SatResult::Unsat;
    std::vector<int> assumptions;
    for (Lit l : assumps) {
      if (l == 0 || std::abs(l) > nvars()) throw std::logic_error("assumption out of range");
      assumptions.push_back(mk(l));
    }
    has_deadline = opts.time_limit_secs > 0;
    if (has_deadline)
      deadline = std::chrono::steady_clock::now() +
                 std::chrono::microseconds(static_cast<int64_t>(opts.time_limit_secs * 1e6));
    conflict_limit = opts.conflict_budget ? stats.conflicts + opts.conflict_budget : 0;
    max_learnts = std::max(2000.0, static_cast<double>(clauses.size()) / 3.0);
    int status = 0;
    for (int restart = 0; status == 0; ++restart) {
      status = search(static_cast<uint64_t>(luby(2, restart) * 100), assumptions);
      if (status == 0) {
        ++stats.restarts;
        max_learnts *= 1.05;
        if (out_of_budget() ||
            (has_deadline && std::chrono::steady_clock::now() > deadline))
          status = 2;
      }
    }
    SatResult r = SatResult::Unknown;
    if (status == 1) {
      r = SatResult::Sat;
      model.assign(assigns.size(), 0);
      for (size_t v = 0; v < assigns.size(); ++v) model[v] = assigns[v] == 1;
    } else if (status == -1) {
      r = SatResult::Unsat;
    }
    cancel_until(0);
    return r;
  }
};

Solver::Solver(SolverOptions opts) : impl_(new Impl) {
  impl_->opts = opts;
  impl_->rng = opts.seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull;
}

Solver::~Solver() { delete impl_; }

int Solver::new_var() { return impl_->new_var() + 1; }

int Solver::num_vars() const { return impl_->nvars(); }

bool Solver::add_clause(std::span<const Lit> lits) {
  std::vector<int> ps;
  ps.reserve(lits.size());
  for (Lit l : lits) {
    if (l == 0 || std::abs(l) > impl_->nvars()) throw std::logic_error("literal out of range");
    ps.push_back(mk(l));
  }
  return impl_->add_clause(std::move(ps));
}

SatResult Solver::solve(std::span<const Lit> assumptions) { return impl_->solve(assumptions); }

bool Solver::model_value(Lit l) const {
  bool v = impl_->model.at(static_cast<size_t>(std::abs(l) - 1)) != 0;
  return l > 0 ? v : !v;
}

const SolverStats& Solver::stats() const { return impl_->stats; }

}  // namespace uvleak
