#include <iomanip>
#include <sstream>

#include "uvleak/engine.hpp"

namespace uvleak {

std::string format_report_kv(const VerificationReport& r, bool timing) {
  std::ostringstream os;
  os << "result=" << verdict_name(r.verdict) << "\n"
     << "invariants_learned=" << r.learned.size() << "\n"
     << "iterations_base=" << r.stats.iterations_base << "\n"
     << "iterations_inductive=" << r.stats.iterations_inductive << "\n"
     << "solver_queries=" << r.stats.solver_queries << "\n"
     << "lookahead=" << r.lookahead << "\n";
  if (!r.reason.empty()) os << "reason=" << r.reason << "\n";
  for (size_t i = 0; i < r.learned.size(); ++i)
    os << "invariant." << i + 1 << "=" << candidate_text(r.learned[i]) << "\n";
  if (timing) os << "seconds=" << std::fixed << std::setprecision(3) << r.seconds << "\n";
  if (r.cex) os << dump_trace(*r.cex);
  return os.str();
}

std::string format_report_human(const VerificationReport& r, bool timing) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(r.verdict);
  if (!r.reason.empty()) os << " (" << r.reason << ")";
  os << "\nlookahead b=" << r.lookahead << ", " << r.candidates << " candidates, "
     << r.learned.size() << " learned\n"
     << "LearnInv: " << r.stats.iterations_base << " base and " << r.stats.iterations_inductive
     << " inductive iterations, " << r.stats.solver_queries << " solver queries\n";
  if (!r.learned.empty()) {
    os << "learned invariants:\n";
    for (const auto& c : r.learned)
      os << "  " << candidate_text(c) << "    [" << provenance_name(c.provenance) << " " << c.label << "]\n";
  }
  if (!r.dropped.empty()) {
    os << "dropped:\n";
    for (const auto& d : r.dropped)
      os << "  " << candidate_text(d.candidate) << "    [" << (d.inductive ? "inductive" : "base")
         << " iteration " << d.iteration << "]\n";
  }
  if (timing) os << "time: " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  if (r.cex) os << "state refuting the final check:\n" << dump_trace(*r.cex);
  return os.str();
}

}  // namespace uvleak
