#include "lexer.hpp"

#include <array>
#include <cctype>

namespace uvleak::detail {

namespace {

constexpr std::array<std::string_view, 10> kMultiPunct = {
    "<->", "<=", ">=", "==", "!=", "&&", "||", "<<", ">>", "->",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  SourceLocation loc;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = loc;
    t.offset = i;
    size_t start = i;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        t.tagged = true;
      }
      t.kind = Tok::Ident;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      advance(j - i);
    } else {
      size_t n = 0;
      for (auto p : kMultiPunct)
        if (src.substr(i, p.size()) == p) {
          n = p.size();
          break;
        }
      if (n == 0) {
        static constexpr std::string_view kSingle = "+-*/%&|^~!<>=?:;,()[]{}";
        if (kSingle.find(c) == std::string_view::npos) {
          std::string shown = std::isprint(static_cast<unsigned char>(c))
                                  ? std::string(1, c)
                                  : "\\x" + std::to_string(static_cast<unsigned char>(c));
          throw ParseError(loc, "unexpected character '" + shown + "'");
        }
        n = 1;
      }
      t.kind = Tok::Punct;
      advance(n);
    }
    t.text = std::string(src.substr(start, i - start));
    t.end = i;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = loc;
  end.offset = end.end = src.size();
  out.push_back(end);
  return out;
}

}  // namespace uvleak::detail
