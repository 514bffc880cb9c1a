#pragma once

#include <set>
#include <string>
#include <vector>

#include "uvleak/circuit.hpp"

namespace uvleak {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  // Circuit-relative location such as "assign pc" or "wire leak".
  std::string location;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& d);
std::string format_diagnostics(const Diagnostics& d);

Diagnostics validate(const Circuit& c);

struct ReadWriteSets {
  std::set<std::string> reads;
  std::set<std::string> writes;
};

ReadWriteSets read_write_sets(const Circuit& c);
std::set<std::string> vars(const Circuit& c);

// Checks ARCH ∩ μARCH = ∅ and ARCH ∪ μARCH covers every declared register.
Diagnostics check_partition(const Circuit& c, const std::set<std::string>& arch,
                            const std::set<std::string>& uarch);

}  // namespace uvleak
