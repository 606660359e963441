#include <algorithm>

#include "dd/trace.hpp"
#include "lexer.hpp"

namespace dd::trace {

namespace {

using detail::Tok;
using detail::Token;

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<Stmt> statements(bool in_block) {
    std::vector<Stmt> out;
    while (true) {
      const Tok k = peek().kind;
      if (k == Tok::End) {
        if (in_block) fail(peek(), "expected '}' before end of input");
        return out;
      }
      if (k == Tok::RBrace) {
        if (!in_block) fail(peek(), "unexpected '}'");
        return out;
      }
      out.push_back(statement());
    }
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] static void fail(const Token& at, const std::string& what) {
    throw SyntaxError(at.line, at.column, what);
  }
  const Token& expect(Tok kind) {
    if (peek().kind != kind)
      fail(peek(), "expected " + std::string(detail::describe(kind)) + ", found " +
                       std::string(detail::describe(peek().kind)));
    return next();
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }

  Stmt statement() {
    const Token& first = peek();
    Stmt s;
    s.line = first.line;
    if (first.kind != Tok::Ident) fail(first, "expected a statement");

    if (first.text == "while" && peek(1).kind == Tok::LParen) {
      next();
      next();
      s.kind = Stmt::Kind::While;
      s.expr = expression();
      expect(Tok::RParen);
      expect(Tok::LBrace);
      s.body = statements(true);
      s.end_line = expect(Tok::RBrace).line;
      return s;
    }
    if (first.text == "print" && peek(1).kind == Tok::LParen) {
      next();
      next();
      s.kind = Stmt::Kind::Print;
      do {
        PrintArg arg;
        if (peek().kind == Tok::String)
          arg.text = next().text;
        else
          arg.expr = expression();
        s.args.push_back(std::move(arg));
      } while (accept(Tok::Comma));
      expect(Tok::RParen);
      expect(Tok::Semi);
      return s;
    }

    s.target = next().text;
    if (s.target == "while" || s.target == "print" || s.target == "input")
      fail(first, "'" + s.target + "' is reserved");
    expect(Tok::Assign);
    if (peek().kind == Tok::Ident && peek().text == "input" && peek(1).kind == Tok::LParen) {
      next();
      next();
      s.kind = Stmt::Kind::Read;
      if (peek().kind == Tok::String) s.prompt = next().text;
      expect(Tok::RParen);
    } else {
      s.kind = Stmt::Kind::Assign;
      s.expr = expression();
    }
    expect(Tok::Semi);
    return s;
  }

  static std::unique_ptr<Expr> binary(BinaryOp op, std::unique_ptr<Expr> l, std::unique_ptr<Expr> r) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::unique_ptr<Expr> expression() {
    auto lhs = sum();
    while (true) {
      BinaryOp op;
      switch (peek().kind) {
        case Tok::Lt: op = BinaryOp::Lt; break;
        case Tok::Le: op = BinaryOp::Le; break;
        case Tok::Eq: op = BinaryOp::Eq; break;
        case Tok::Ne: op = BinaryOp::Ne; break;
        case Tok::Gt: op = BinaryOp::Gt; break;
        case Tok::Ge: op = BinaryOp::Ge; break;
        default: return lhs;
      }
      next();
      lhs = binary(op, std::move(lhs), sum());
    }
  }

  std::unique_ptr<Expr> sum() {
    auto lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  std::unique_ptr<Expr> term() {
    auto lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const BinaryOp op = next().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  std::unique_ptr<Expr> unary() {
    const Token& t = peek();
    auto e = std::make_unique<Expr>();
    switch (t.kind) {
      case Tok::Minus:
        next();
        e->kind = Expr::Kind::Negate;
        e->lhs = unary();
        return e;
      case Tok::Number:
        e->kind = Expr::Kind::Number;
        e->number = next().number;
        return e;
      case Tok::Ident:
        if (t.text == "input") fail(t, "input() is only allowed as a whole assignment");
        e->kind = Expr::Kind::Variable;
        e->name = next().text;
        return e;
      case Tok::LParen: {
        next();
        auto inner = expression();
        expect(Tok::RParen);
        return inner;
      }
      default:
        fail(t, "expected an expression, found " + std::string(detail::describe(t.kind)));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

const Stmt* Program::at_line(int line) const {
  if (auto it = by_line_.find(line); it != by_line_.end()) return it->second;
  if (auto it = by_end_line_.find(line); it != by_end_line_.end()) return it->second;
  return nullptr;
}

std::size_t Program::statement_count() const { return by_line_.size(); }

std::string Program::source_text(int line) const {
  if (line < 1 || static_cast<std::size_t>(line) > source_lines.size()) return {};
  const std::string& s = source_lines[static_cast<std::size_t>(line) - 1];
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void Program::index() {
  by_line_.clear();
  by_end_line_.clear();
  auto walk = [&](auto&& self, const std::vector<Stmt>& stmts) -> void {
    for (const Stmt& s : stmts) {
      if (by_line_.count(s.line) || by_end_line_.count(s.line))
        throw SyntaxError(s.line, 1, "more than one statement on this line");
      by_line_[s.line] = &s;
      if (s.kind == Stmt::Kind::While) {
        self(self, s.body);
        if (by_line_.count(s.end_line) || by_end_line_.count(s.end_line))
          throw SyntaxError(s.end_line, 1, "loop end shares its line with a statement");
        by_end_line_[s.end_line] = &s;
      }
    }
  };
  walk(walk, statements);
}

Program parse_program(std::string_view text) {
  Program p;
  Parser parser(detail::lex(text));
  p.statements = parser.statements(false);
  p.source_lines = split_lines(text);
  p.index();
  return p;
}

}  // namespace dd::trace
