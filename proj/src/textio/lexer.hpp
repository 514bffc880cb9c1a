#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uvleak/error.hpp"

namespace uvleak::detail {

enum class Tok {
  Ident,
  Number,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation loc;
  size_t offset = 0;
  size_t end = 0;
  // Identifier carries a copy tag such as ".1".
  bool tagged = false;
};

std::vector<Token> tokenize(std::string_view src);

}  // namespace uvleak::detail
