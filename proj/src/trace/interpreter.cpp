#include <charconv>
#include <sstream>
#include <unordered_map>

#include "dd/trace.hpp"

namespace dd::trace {

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Statement: return "statement";
    case EventKind::LoopHead: return "loop-head";
    case EventKind::LoopEnd: return "loop-end";
  }
  return "statement";
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Completed: return "completed";
    case Status::RuntimeError: return "runtime-error";
    case Status::BudgetExhausted: return "budget-exhausted";
  }
  return "completed";
}

std::string event_label(const Event& e) { return std::to_string(e.line) + "_" + std::to_string(e.seq); }

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const Event& e : trace) {
    out += std::to_string(e.seq);
    out += '\t';
    out += std::to_string(e.line);
    out += '\t';
    out += event_kind_name(e.kind);
    out += '\n';
  }
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    Event e;
    std::string kind;
    if (!(fields >> e.seq >> e.line >> kind))
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": malformed");
    if (kind == "statement")
      e.kind = EventKind::Statement;
    else if (kind == "loop-head")
      e.kind = EventKind::LoopHead;
    else if (kind == "loop-end")
      e.kind = EventKind::LoopEnd;
    else
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    trace.push_back(e);
  }
  return trace;
}

namespace {

struct RuntimeFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetStop {};

// Values wrap on overflow; an absent value is an undefined variable.
using Value = std::optional<std::int64_t>;

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

class Machine {
public:
  Machine(std::span<const std::string> stdin_tokens, std::size_t budget)
      : stdin_(stdin_tokens), budget_(budget) {}

  Value eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number: return e.number;
      case Expr::Kind::Variable: {
        auto it = vars_.find(e.name);
        if (it == vars_.end()) return std::nullopt;
        return it->second;
      }
      case Expr::Kind::Negate: return wrap(0u - static_cast<std::uint64_t>(eval(*e.lhs).value_or(0)));
      case Expr::Kind::Binary: break;
    }
    const std::int64_t a = eval(*e.lhs).value_or(0);
    const std::int64_t b = eval(*e.rhs).value_or(0);
    const auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
    switch (e.op) {
      case BinaryOp::Add: return wrap(ua + ub);
      case BinaryOp::Sub: return wrap(ua - ub);
      case BinaryOp::Mul: return wrap(ua * ub);
      case BinaryOp::Div:
        if (b == 0) throw RuntimeFault("division by zero");
        if (b == -1) return wrap(0u - ua);
        return a / b;
      case BinaryOp::Lt: return a < b;
      case BinaryOp::Le: return a <= b;
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Ne: return a != b;
      case BinaryOp::Gt: return a > b;
      case BinaryOp::Ge: return a >= b;
    }
    return 0;
  }

  // Executes a non-loop statement.
  void exec_simple(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign: vars_[s.target] = eval(*s.expr); return;
      case Stmt::Kind::Read: {
        if (s.prompt) out_ += *s.prompt;
        if (next_token_ >= stdin_.size()) throw RuntimeFault("input exhausted");
        const std::string& tok = stdin_[next_token_++];
        std::int64_t v = 0;
        const char* end = tok.data() + tok.size();
        auto [p, ec] = std::from_chars(tok.data(), end, v);
        if (ec != std::errc{} || p != end) throw RuntimeFault("input '" + tok + "' is not an integer");
        vars_[s.target] = v;
        return;
      }
      case Stmt::Kind::Print:
        for (const PrintArg& a : s.args) {
          if (a.text) {
            out_ += *a.text;
          } else if (Value v = eval(*a.expr)) {
            out_ += std::to_string(*v);
          }
        }
        return;
      case Stmt::Kind::While: return;
    }
  }

  void tick() {
    if (executed_ >= budget_) throw BudgetStop{};
    ++executed_;
  }

  std::string out_;
  std::size_t executed_ = 0;

private:
  std::unordered_map<std::string, Value> vars_;
  std::span<const std::string> stdin_;
  std::size_t next_token_ = 0;
  std::size_t budget_;
};

class Tracer {
public:
  Tracer(Machine& m, Trace& trace) : m_(m), trace_(trace) {}

  void run(const std::vector<Stmt>& stmts) {
    for (const Stmt& s : stmts) {
      if (s.kind != Stmt::Kind::While) {
        record(s.line, EventKind::Statement);
        m_.exec_simple(s);
        continue;
      }
      while (true) {
        record(s.line, EventKind::LoopHead);
        if (m_.eval(*s.expr).value_or(0) == 0) break;
        run(s.body);
        record(s.end_line, EventKind::LoopEnd);
      }
    }
  }

private:
  void record(int line, EventKind kind) {
    m_.tick();
    trace_.push_back(Event{line, trace_.size() + 1, kind});
  }

  Machine& m_;
  Trace& trace_;
};

}  // namespace

TracedRun trace_program(const Program& program, std::span<const std::string> stdin_tokens,
                        std::size_t budget) {
  TracedRun run;
  Machine m(stdin_tokens, budget);
  Tracer tracer(m, run.trace);
  try {
    tracer.run(program.statements);
  } catch (const RuntimeFault& f) {
    run.output.status = Status::RuntimeError;
    run.output.error = "line " + std::to_string(run.trace.back().line) + ": " + f.what();
  } catch (const BudgetStop&) {
    run.output.status = Status::BudgetExhausted;
    run.output.error = "event budget of " + std::to_string(budget) + " exhausted";
  }
  run.output.stdout_text = std::move(m.out_);
  run.output.events_executed = m.executed_;
  return run;
}

RunOutput replay_events(const Program& program, const Trace& trace, const Configuration& config,
                        std::span<const std::string> stdin_tokens, std::size_t budget) {
  if (config.universe_size() != trace.size())
    throw std::invalid_argument("configuration universe does not match the trace length");
  RunOutput out;
  Machine m(stdin_tokens, budget);
  try {
    for (DeltaId id : config.members()) {
      const Event& e = trace[id];
      m.tick();
      if (e.kind != EventKind::Statement) continue;
      const Stmt* s = program.at_line(e.line);
      if (s == nullptr || s->line != e.line || s->kind == Stmt::Kind::While)
        throw RuntimeFault("event " + event_label(e) + " does not name a statement");
      m.exec_simple(*s);
    }
  } catch (const RuntimeFault& f) {
    out.status = Status::RuntimeError;
    out.error = f.what();
  } catch (const BudgetStop&) {
    out.status = Status::BudgetExhausted;
    out.error = "event budget of " + std::to_string(budget) + " exhausted";
  }
  out.stdout_text = std::move(m.out_);
  out.events_executed = m.executed_;
  return out;
}

}  // namespace dd::trace
