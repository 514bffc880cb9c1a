#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "uvleak/error.hpp"
#include "uvleak/sat.hpp"

namespace uvleak {

std::string to_dimacs(int num_vars, const std::vector<std::vector<Lit>>& clauses,
                      std::span<const Lit> assumptions) {
  std::ostringstream os;
  os << "p cnf " << num_vars << ' ' << clauses.size() + assumptions.size() << '\n';
  for (const auto& c : clauses) {
    for (Lit l : c) os << l << ' ';
    os << "0\n";
  }
  for (Lit l : assumptions) os << l << " 0\n";
  return os.str();
}

SatOutcome parse_solver_output(const std::string& out, int num_vars) {
  SatOutcome r;
  bool saw_status = false;
  std::istringstream in(out);
  std::string line;
  r.model.assign(static_cast<size_t>(num_vars) + 1, false);
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      saw_status = true;
      if (line.find("UNSATISFIABLE") != std::string::npos)
        r.result = SatResult::Unsat;
      else if (line.find("SATISFIABLE") != std::string::npos)
        r.result = SatResult::Sat;
      else
        r.result = SatResult::Unknown;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long l = 0;
      while (vs >> l) {
        if (l == 0) break;
        long v = std::labs(l);
        if (v > num_vars) throw Error("external solver reported variable " + std::to_string(v));
        r.model[static_cast<size_t>(v)] = l > 0;
      }
    }
  }
  if (!saw_status) throw Error("external solver printed no 's' status line");
  if (r.result != SatResult::Sat) r.model.clear();
  return r;
}

SatOutcome run_external_solver(const std::string& solver_path, int num_vars,
                               const std::vector<std::vector<Lit>>& clauses,
                               std::span<const Lit> assumptions, double time_limit_secs) {
  char name[] = "/tmp/uvleak-XXXXXX.cnf";
  int fd = mkstemps(name, 4);
  if (fd < 0) throw Error("cannot create temporary DIMACS file");
  std::string text = to_dimacs(num_vars, clauses, assumptions);
  size_t written = 0;
  while (written < text.size()) {
    ssize_t n = ::write(fd, text.data() + written, text.size() - written);
    if (n <= 0) {
      ::close(fd);
      ::unlink(name);
      throw Error("cannot write temporary DIMACS file");
    }
    written += static_cast<size_t>(n);
  }
  ::close(fd);

  std::string cmd;
  if (time_limit_secs > 0) cmd = "timeout " + std::to_string(static_cast<long>(std::ceil(time_limit_secs))) + " ";
  cmd += "'" + solver_path + "' '" + name + "' 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    ::unlink(name);
    throw Error("cannot run external solver " + solver_path);
  }
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = ::pclose(pipe);
  ::unlink(name);
  if (WIFEXITED(status) && WEXITSTATUS(status) == 124) return SatOutcome{};
  return parse_solver_output(out, num_vars);
}

SatOutcome solve_cnf(const CnfBuilder& cnf, const SolverOptions& opts, std::span<const Lit> assumptions) {
  SolverOptions o = opts;
  if (const char* lim = std::getenv("UVLEAK_LIMIT_SECS")) {
    double secs = std::atof(lim);
    if (secs > 0 && (o.time_limit_secs <= 0 || secs < o.time_limit_secs)) o.time_limit_secs = secs;
  }
  if (const char* ext = std::getenv("UVLEAK_SOLVER"); ext && *ext)
    return run_external_solver(ext, cnf.num_vars(), cnf.clauses(), assumptions, o.time_limit_secs);

  Solver s(o);
  for (int v = 0; v < cnf.num_vars(); ++v) s.new_var();
  for (const auto& c : cnf.clauses())
    if (!s.add_clause(c)) break;
  SatOutcome r;
  r.result = s.solve(assumptions);
  if (r.result == SatResult::Sat) {
    r.model.assign(static_cast<size_t>(cnf.num_vars()) + 1, false);
    for (int v = 1; v <= cnf.num_vars(); ++v) r.model[static_cast<size_t>(v)] = s.model_value(v);
  }
  return r;
}

}  // namespace uvleak
