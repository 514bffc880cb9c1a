#pragma once

#include <string>
#include <vector>

#include "uvleak/simulator.hpp"
#include "uvleak/textio.hpp"

namespace fixture {

inline std::string corpus(const std::string& rel) { return std::string(UVLEAK_CORPUS_DIR) + "/" + rel; }

inline uvleak::Design design(const std::string& rel) {
  return uvleak::parse_design(uvleak::read_text_file(corpus(rel)));
}

inline std::vector<long long> nums(const std::vector<uvleak::Value>& vs) {
  std::vector<long long> out;
  for (const auto& v : vs) out.push_back(v.defined() ? static_cast<long long>(v.bits()) : -1);
  return out;
}

// m(i) = i for i <= 10, 0 elsewhere; all other registers 0.
inline uvleak::Valuation counting_memory(const uvleak::Simulator& sim) {
  uvleak::Valuation mu = sim.make_valuation();
  for (uint32_t i = 0; i <= 10; ++i) mu.set("m", i, uvleak::Value::of(i));
  return mu;
}

// First cells of m as given, the rest 0.
inline uvleak::Valuation with_memory(const uvleak::Simulator& sim, const std::vector<uint64_t>& cells) {
  uvleak::Valuation mu = sim.make_valuation();
  for (uint32_t i = 0; i < cells.size(); ++i) mu.set("m", i, uvleak::Value::of(cells[i]));
  return mu;
}

}  // namespace fixture
