// Tiny DPLL solver speaking the competition output format. Test-only
// stand-in for an external solver.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace {

std::vector<std::vector<int>> clauses;
std::vector<int> assign;  // 0 unknown, 1 true, -1 false

int value(int lit) {
  int a = assign[std::abs(lit)];
  return lit > 0 ? a : -a;
}

bool dpll() {
  std::vector<int> trail;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : clauses) {
      int unassigned = 0, last = 0;
      bool sat = false;
      for (int l : c) {
        int v = value(l);
        if (v == 1) { sat = true; break; }
        if (v == 0) { ++unassigned; last = l; }
      }
      if (sat) continue;
      if (unassigned == 0) {
        for (int v : trail) assign[v] = 0;
        return false;
      }
      if (unassigned == 1) {
        assign[std::abs(last)] = last > 0 ? 1 : -1;
        trail.push_back(std::abs(last));
        changed = true;
      }
    }
  }
  size_t v = 1;
  while (v < assign.size() && assign[v] != 0) ++v;
  if (v == assign.size()) return true;
  for (int guess : {1, -1}) {
    assign[v] = guess;
    if (dpll()) return true;
  }
  assign[v] = 0;
  for (int t : trail) assign[t] = 0;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return 2;
  std::ifstream in(argv[1]);
  std::string line;
  int nvars = 0;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream is(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      size_t n;
      is >> p >> cnf >> nvars >> n;
      continue;
    }
    int lit;
    while (is >> lit) {
      if (lit == 0) {
        clauses.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(lit);
      }
    }
  }
  assign.assign(nvars + 1, 0);
  if (!dpll()) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s SATISFIABLE\nv";
  for (int v = 1; v <= nvars; ++v) std::cout << ' ' << (assign[v] >= 0 ? v : -v);
  std::cout << " 0\n";
  return 10;
}
