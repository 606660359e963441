#include "lexer.hpp"

#include <cctype>
#include <limits>

#include "dd/trace.hpp"

namespace dd::trace {

SyntaxError::SyntaxError(int l, int c, const std::string& what)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + what), line(l), column(c) {}

namespace detail {

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Assign: return "'='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
  }
  return "token";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto emit = [&](Tok kind, int l, int c) -> Token& {
    out.push_back(Token{kind, {}, 0, l, c});
    return out.back();
  };

  while (i < src.size()) {
    const char ch = src[i];
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      advance();
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      emit(Tok::Ident, l, c).text = std::string(src.substr(i, j - i));
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::int64_t v = 0;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        const int d = src[i] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10)
          throw SyntaxError(l, c, "integer literal too large");
        v = v * 10 + d;
        advance();
      }
      emit(Tok::Number, l, c).number = v;
      continue;
    }
    if (ch == '"') {
      advance();
      std::string text;
      while (true) {
        if (i >= src.size() || src[i] == '\n') throw SyntaxError(l, c, "unterminated string");
        if (src[i] == '"') {
          advance();
          break;
        }
        if (src[i] == '\\') {
          if (i + 1 >= src.size()) throw SyntaxError(line, col, "unterminated escape");
          const char e = src[i + 1];
          switch (e) {
            case 'n': text.push_back('\n'); break;
            case 't': text.push_back('\t'); break;
            case '\\': text.push_back('\\'); break;
            case '"': text.push_back('"'); break;
            default: throw SyntaxError(line, col, std::string("unknown escape '\\") + e + "'");
          }
          advance(2);
          continue;
        }
        text.push_back(src[i]);
        advance();
      }
      emit(Tok::String, l, c).text = std::move(text);
      continue;
    }
    const char next = i + 1 < src.size() ? src[i + 1] : '\0';
    auto two = [&](Tok kind) {
      emit(kind, l, c);
      advance(2);
    };
    auto one = [&](Tok kind) {
      emit(kind, l, c);
      advance();
    };
    switch (ch) {
      case '=': next == '=' ? two(Tok::Eq) : one(Tok::Assign); break;
      case '!':
        if (next != '=') throw SyntaxError(l, c, "expected '!='");
        two(Tok::Ne);
        break;
      case '<': next == '=' ? two(Tok::Le) : one(Tok::Lt); break;
      case '>': next == '=' ? two(Tok::Ge) : one(Tok::Gt); break;
      case '+': one(Tok::Plus); break;
      case '-': one(Tok::Minus); break;
      case '*': one(Tok::Star); break;
      case '/': one(Tok::Slash); break;
      case '(': one(Tok::LParen); break;
      case ')': one(Tok::RParen); break;
      case '{': one(Tok::LBrace); break;
      case '}': one(Tok::RBrace); break;
      case ',': one(Tok::Comma); break;
      case ';': one(Tok::Semi); break;
      default: throw SyntaxError(l, c, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back(Token{Tok::End, {}, 0, line, col});
  return out;
}

}  // namespace detail
}  // namespace dd::trace
