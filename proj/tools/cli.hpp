#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uvleak/simulator.hpp"

namespace uvleak::cli {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kResource = 3 };

// Runs one command line. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// "m:0,1,2,...,10" or "m:1,0,2@0": explicit cells, "..." continues the
// arithmetic progression of the two preceding cells, "@v" fills the rest.
struct MemSpec {
  std::string name;
  std::vector<Value> cells;
  std::optional<Value> fill;
};
MemSpec parse_mem_spec(const std::string& text);
void apply_mem_spec(Valuation& mu, const MemSpec& spec);

}  // namespace uvleak::cli
