#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dd::trace::detail {

enum class Tok {
  Ident, Number, String,
  Assign, Eq, Ne, Lt, Le, Gt, Ge,
  Plus, Minus, Star, Slash,
  LParen, RParen, LBrace, RBrace, Comma, Semi,
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name or decoded string literal
  std::int64_t number = 0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view source);

std::string_view describe(Tok kind);

}  // namespace dd::trace::detail
