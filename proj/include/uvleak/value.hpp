#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace uvleak {

// Widths are capped so products of two operands fit in 64 bits.
inline constexpr unsigned kMaxWidth = 32;

constexpr uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
}

// A circuit value: an unsigned bit-vector payload or the single undefined
// value ⊥. ⊥ is a whole-value tag, never a per-bit unknown.
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value bottom() { return Value(); }
  static constexpr Value of(uint64_t bits) {
    Value v;
    v.defined_ = true;
    v.bits_ = bits;
    return v;
  }

  constexpr bool defined() const { return defined_; }
  constexpr uint64_t bits() const { return bits_; }
  // Predicate reading: ⊥ and 0 are false.
  constexpr bool truthy() const { return defined_ && bits_ != 0; }

  constexpr Value truncated(unsigned width) const {
    return defined_ ? of(bits_ & width_mask(width)) : bottom();
  }

  friend constexpr bool operator==(const Value&, const Value&) = default;

  // "bot" or decimal.
  std::string str() const;
  static std::optional<Value> parse(std::string_view text);

 private:
  bool defined_ = false;
  uint64_t bits_ = 0;
};

}  // namespace uvleak
