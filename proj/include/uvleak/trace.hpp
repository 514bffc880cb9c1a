#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uvleak/value.hpp"

namespace uvleak {

struct TraceRow {
  size_t cycle = 0;
  std::vector<std::pair<std::string, Value>> values;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// A finite trace prefix. Filtered traces keep the original cycle numbers.
struct TraceDump {
  // "full" or "filtered(<predicate>)".
  std::string role = "full";
  std::vector<TraceRow> rows;

  // Values of one column in row order; rows lacking the column are skipped.
  std::vector<Value> column(std::string_view name) const;

  friend bool operator==(const TraceDump&, const TraceDump&) = default;
};

// Header line "trace role=<role>" followed by one "cycle=<n> k=v ..." line
// per row.
std::string dump_trace(const TraceDump& t);
TraceDump load_trace(std::string_view text);

// "0·1·3" style rendering of one column, used in human output.
std::string join_values(const std::vector<Value>& vs, std::string_view sep = "·");

}  // namespace uvleak
