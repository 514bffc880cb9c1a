#include "uvleak/trace.hpp"

#include <charconv>
#include <sstream>

#include "uvleak/error.hpp"

namespace uvleak {

std::vector<Value> TraceDump::column(std::string_view name) const {
  std::vector<Value> out;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.values)
      if (k == name) {
        out.push_back(v);
        break;
      }
  return out;
}

std::string dump_trace(const TraceDump& t) {
  std::ostringstream os;
  os << "trace role=" << t.role << '\n';
  for (const auto& row : t.rows) {
    os << "cycle=" << row.cycle;
    for (const auto& [k, v] : row.values) os << ' ' << k << '=' << v.str();
    os << '\n';
  }
  return os.str();
}

TraceDump load_trace(std::string_view text) {
  TraceDump t;
  size_t line_no = 0;
  bool header = false;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) -> ParseError {
      return ParseError({line_no, 1}, msg);
    };
    if (!header) {
      constexpr std::string_view kHead = "trace role=";
      if (line.substr(0, kHead.size()) != kHead) throw fail("expected 'trace role=...' header");
      t.role = std::string(line.substr(kHead.size()));
      if (t.role.empty()) throw fail("empty trace role");
      header = true;
      continue;
    }
    TraceRow row;
    std::istringstream fields{std::string(line)};
    std::string field;
    bool first = true;
    while (fields >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos || eq == 0) throw fail("malformed field '" + field + "'");
      std::string key = field.substr(0, eq);
      std::string val = field.substr(eq + 1);
      if (first) {
        if (key != "cycle") throw fail("row must start with cycle=");
        size_t n = 0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
        if (ec != std::errc() || p != val.data() + val.size()) throw fail("bad cycle '" + val + "'");
        row.cycle = n;
        first = false;
        continue;
      }
      auto v = Value::parse(val);
      if (!v) throw fail("bad value '" + val + "'");
      row.values.emplace_back(key, *v);
    }
    if (first) throw fail("empty row");
    if (!t.rows.empty() && row.cycle <= t.rows.back().cycle)
      throw fail("cycles must strictly increase");
    t.rows.push_back(std::move(row));
  }
  if (!header) throw ParseError({1, 1}, "missing trace header");
  return t;
}

std::string join_values(const std::vector<Value>& vs, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out += sep;
    out += vs[i].str();
  }
  return out;
}

}  // namespace uvleak
