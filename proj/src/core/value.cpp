#include "uvleak/value.hpp"

#include <charconv>

namespace uvleak {

std::string Value::str() const {
  return defined_ ? std::to_string(bits_) : std::string("bot");
}

std::optional<Value> Value::parse(std::string_view text) {
  if (text == "bot" || text == "\xE2\x8A\xA5") return bottom();
  if (text.empty()) return std::nullopt;
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  } else if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
    base = 2;
    text.remove_prefix(2);
  }
  uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n, base);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return of(n);
}

}  // namespace uvleak
