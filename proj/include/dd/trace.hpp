#pragma once

// A small imperative language with an event tracer and a replayer that
// executes an arbitrary subset of recorded events. Control flow during
// replay comes from the trace, never from re-evaluating conditions.
//
//   program := stmt*
//   stmt    := IDENT "=" expr ";"
//            | IDENT "=" "input" "(" STRING? ")" ";"
//            | "print" "(" arg ("," arg)* ")" ";"
//            | "while" "(" expr ")" "{" stmt* "}"
//   arg     := STRING | expr
//   expr    := sum (("<=" | "<" | "==" | "!=" | ">" | ">=") sum)*
//   sum     := term (("+" | "-") term)*
//   term    := unary (("*" | "/") unary)*
//   unary   := "-" unary | NUMBER | IDENT | "(" expr ")"
//
// '#' starts a comment running to the end of the line.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dd/engine.hpp"

namespace dd::trace {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(int line, int column, const std::string& what);
  int line;
  int column;
};

enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Eq, Ne, Gt, Ge };

struct Expr {
  enum class Kind { Number, Variable, Negate, Binary };
  Kind kind = Kind::Number;
  std::int64_t number = 0;
  std::string name;
  BinaryOp op = BinaryOp::Add;
  std::unique_ptr<Expr> lhs;
  std::unique_ptr<Expr> rhs;
};

struct PrintArg {
  std::optional<std::string> text;  // string literal, else `expr`
  std::unique_ptr<Expr> expr;
};

struct Stmt {
  enum class Kind { Assign, Read, Print, While };
  Kind kind = Kind::Assign;
  int line = 0;
  int end_line = 0;  // line of the closing brace (While only)
  std::string target;
  std::unique_ptr<Expr> expr;          // Assign value / While condition
  std::optional<std::string> prompt;   // Read
  std::vector<PrintArg> args;          // Print
  std::vector<Stmt> body;              // While
};

/// Parsed program. Every statement starts on its own source line.
class Program {
public:
  std::vector<Stmt> statements;
  std::vector<std::string> source_lines;

  /// Statement starting on `line`, or whose loop closes on it.
  const Stmt* at_line(int line) const;
  std::size_t statement_count() const;
  std::string source_text(int line) const;  // trimmed source line

  void index();

private:
  std::map<int, const Stmt*> by_line_;
  std::map<int, const Stmt*> by_end_line_;
  friend Program parse_program(std::string_view);
};

Program parse_program(std::string_view text);

enum class EventKind { Statement, LoopHead, LoopEnd };

std::string_view event_kind_name(EventKind k);

struct Event {
  int line = 0;
  std::size_t seq = 0;  // 1-based execution time
  EventKind kind = EventKind::Statement;
  friend bool operator==(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

/// "line_seq", e.g. "6_11".
std::string event_label(const Event& e);

/// One event per line: `SEQ<TAB>LINE<TAB>KIND`.
std::string format_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

enum class Status { Completed, RuntimeError, BudgetExhausted };

std::string_view status_name(Status s);

inline constexpr std::size_t kDefaultBudget = 1'000'000;

struct RunOutput {
  std::string stdout_text;
  Status status = Status::Completed;
  std::string error;
  std::size_t events_executed = 0;
};

struct TracedRun {
  Trace trace;
  RunOutput output;
};

/// Executes the program, recording a statement event per executed
/// statement, a loop-head event per condition evaluation and a loop-end
/// event per back edge.
TracedRun trace_program(const Program& program, std::span<const std::string> stdin_tokens,
                        std::size_t budget = kDefaultBudget);

/// Executes exactly the included events in order. Loop events are no-ops.
/// Reads consume stdin tokens only when executed. Undefined variables act
/// as 0 in arithmetic and print as nothing.
RunOutput replay_events(const Program& program, const Trace& trace, const Configuration& config,
                        std::span<const std::string> stdin_tokens, std::size_t budget = kDefaultBudget);

/// Keeps, from each output line containing one of `prefixes`, the text from
/// the earliest such occurrence to the end of the line (prompts printed
/// without a newline share a line with later output). Every kept line ends
/// in '\n'. No prefixes: the output is returned unchanged.
std::string filter_output(std::string_view output, std::span<const std::string> prefixes);

struct Expectation {
  std::vector<std::string> prefixes;
  std::string expected;
};

/// Fail iff the replay completes and its filtered output equals the
/// expectation; Unresolved if the replay does not complete; Pass otherwise.
class ReplayOracle final : public TestOracle {
public:
  ReplayOracle(const Program& program, const Trace& trace, std::vector<std::string> stdin_tokens,
               Expectation expectation, std::size_t budget = kDefaultBudget);
  Evaluation evaluate(const Configuration& config) override;

private:
  const Program& program_;
  const Trace& trace_;
  std::vector<std::string> stdin_;
  Expectation expectation_;
  std::size_t budget_;
};

struct TraceReduction {
  TracedRun original;
  Expectation expectation;
  MinimizationResult result;
  std::vector<Event> slice;
};

/// Traces the program, then minimizes the event set under ReplayOracle.
/// An empty `expectation.expected` is replaced by the filtered output of
/// the full run.
TraceReduction reduce_trace(const Program& program, std::span<const std::string> stdin_tokens,
                            Expectation expectation, const EngineOptions& opts = {},
                            std::size_t budget = kDefaultBudget);

/// Event / original / reduced columns; excluded events leave the reduced
/// column blank.
std::string render_slice_table(const Program& program, const Trace& trace, const Configuration& slice);

}  // namespace dd::trace
