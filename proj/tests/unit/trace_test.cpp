#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "dd/trace.hpp"

namespace tr = dd::trace;
using dd::Configuration;

#ifndef DD_SAMPLES_DIR
#error "DD_SAMPLES_DIR must point at the samples directory"
#endif

namespace {

std::string sample_source() {
  std::ifstream in(std::string(DD_SAMPLES_DIR) + "/sample.prog");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kInputs{"0", "5"};

// Independent model of the sample program: its own execution loop and its
// own replay of (line) events, written against the listing.
struct SampleModel {
  struct Ev {
    int line;
  };
  static std::vector<Ev> trace(long a, long b) {
    std::vector<Ev> t{{1}, {2}, {3}, {4}};
    while (true) {
      t.push_back({5});
      if (!(a <= b)) break;
      t.push_back({6});
      t.push_back({7});
      t.push_back({8});
      t.push_back({9});
      ++a;
    }
    t.push_back({10});
    t.push_back({11});
    return t;
  }
  static std::string replay(const std::vector<Ev>& t, const std::vector<bool>& keep, std::vector<long> in) {
    std::map<std::string, std::optional<long>> v;
    auto val = [&](const std::string& n) { return v[n].value_or(0); };
    auto show = [&](const std::string& n) { return v[n] ? std::to_string(*v[n]) : std::string(); };
    std::size_t next = 0;
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!keep[i]) continue;
      switch (t[i].line) {
        case 1: v["sum"] = 0; break;
        case 2: v["mul"] = 1; break;
        case 3: out += "a? "; v["a"] = in.at(next++); break;
        case 4: out += "b? "; v["b"] = in.at(next++); break;
        case 6: v["sum"] = val("sum") + val("a"); break;
        case 7: v["mul"] = val("mul") * val("a"); break;
        case 8: v["a"] = val("a") + 1; break;
        case 10: out += "sum = " + show("sum") + "\n"; break;
        case 11: out += "mul = " + show("mul") + "\n"; break;
        default: break;
      }
    }
    return out;
  }
};

std::vector<bool> keep_of(std::size_t n, const Configuration& c) {
  std::vector<bool> keep(n, false);
  for (auto id : c.members()) keep[id] = true;
  return keep;
}

// Slice must reproduce the filtered output under the model, and dropping
// any single event must change it.
void expect_model_minimal(const Configuration& slice, const std::vector<std::string>& prefixes) {
  const auto model = SampleModel::trace(0, 5);
  const auto all = std::vector<bool>(model.size(), true);
  const auto expected = tr::filter_output(SampleModel::replay(model, all, {0, 5}), prefixes);
  auto keep = keep_of(model.size(), slice);
  EXPECT_EQ(tr::filter_output(SampleModel::replay(model, keep, {0, 5}), prefixes), expected);
  for (auto id : slice.members()) {
    keep[id] = false;
    EXPECT_NE(tr::filter_output(SampleModel::replay(model, keep, {0, 5}), prefixes), expected) << "event " << id;
    keep[id] = true;
  }
}

std::vector<std::string> labels(const std::vector<tr::Event>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(tr::event_label(e));
  return out;
}

}  // namespace

TEST(TraceProgram, SampleHasThirtySevenEvents) {
  const auto p = tr::parse_program(sample_source());
  EXPECT_EQ(p.statement_count(), 10u);
  const auto run = tr::trace_program(p, kInputs);
  EXPECT_EQ(run.output.status, tr::Status::Completed);
  EXPECT_EQ(run.trace.size(), 37u);
  EXPECT_EQ(run.trace.size(), SampleModel::trace(0, 5).size());
  EXPECT_EQ(run.output.stdout_text, "a? b? sum = 15\nmul = 0\n");
  EXPECT_EQ(tr::event_label(run.trace[10]), "6_11");
  EXPECT_EQ(tr::event_label(run.trace.back()), "11_37");
  EXPECT_EQ(run.trace[4].kind, tr::EventKind::LoopHead);
  EXPECT_EQ(run.trace[8].kind, tr::EventKind::LoopEnd);
  for (std::size_t i = 0; i < run.trace.size(); ++i) EXPECT_EQ(run.trace[i].line, SampleModel::trace(0, 5)[i].line);
}

TEST(TraceProgram, EmptyLoopGivesSevenEvents) {
  const auto p = tr::parse_program(sample_source());
  const std::vector<std::string> in{"1", "0"};
  const auto run = tr::trace_program(p, in);
  EXPECT_EQ(run.trace.size(), 7u);
  EXPECT_EQ(run.output.stdout_text, "a? b? sum = 0\nmul = 1\n");
}

TEST(Replay, FullConfigurationReproducesTheRun) {
  const auto p = tr::parse_program(sample_source());
  const auto run = tr::trace_program(p, kInputs);
  const auto replay = tr::replay_events(p, run.trace, Configuration::full(run.trace.size()), kInputs);
  EXPECT_EQ(replay.status, tr::Status::Completed);
  EXPECT_EQ(replay.stdout_text, run.output.stdout_text);
}

TEST(Replay, UndefinedValuesActAsZeroAndPrintEmpty) {
  const auto p = tr::parse_program(sample_source());
  const auto run = tr::trace_program(p, kInputs);
  // Events 3_3, 7_7 and 11_37.
  const auto out = tr::replay_events(p, run.trace, Configuration(37, {2, 6, 36}), kInputs);
  EXPECT_EQ(out.stdout_text, "a? mul = 0\n");
  EXPECT_EQ(tr::replay_events(p, run.trace, Configuration(37, {35}), kInputs).stdout_text, "sum = \n");
}

TEST(Replay, AgreesWithIndependentModelOnRandomSubsets) {
  const auto p = tr::parse_program(sample_source());
  const auto run = tr::trace_program(p, kInputs);
  const auto model = SampleModel::trace(0, 5);
  std::mt19937_64 rng(61);
  for (int i = 0; i < 500; ++i) {
    std::vector<dd::DeltaId> ids;
    for (dd::DeltaId k = 0; k < 37; ++k)
      if (rng() % 2) ids.push_back(k);
    const Configuration c(37, ids);
    EXPECT_EQ(tr::replay_events(p, run.trace, c, kInputs).stdout_text,
              SampleModel::replay(model, keep_of(37, c), {0, 5}));
  }
}

TEST(FilterOutput, KeepsFromTheFirstPrefixOnward) {
  const std::vector<std::string> both{"sum", "mul"};
  EXPECT_EQ(tr::filter_output("a? b? sum = 15\nmul = 0\n", both), "sum = 15\nmul = 0\n");
  EXPECT_EQ(tr::filter_output("noise\nmul = 3", both), "mul = 3\n");
  EXPECT_EQ(tr::filter_output("x mul sum\n", both), "mul sum\n");
  EXPECT_EQ(tr::filter_output("as is\n", {}), "as is\n");
}

TEST(ReduceTrace, DefaultFilterGivesThirteenEvents) {
  const auto p = tr::parse_program(sample_source());
  tr::Expectation ex{{"sum", "mul"}, {}};
  const auto r = tr::reduce_trace(p, kInputs, ex);
  EXPECT_EQ(r.expectation.expected, "sum = 15\nmul = 0\n");
  ASSERT_EQ(r.slice.size(), 13u);
  const auto l = labels(r.slice);
  int mul_events = 0;
  for (const auto& e : r.slice) mul_events += e.line == 7;
  EXPECT_EQ(mul_events, 1);
  for (const char* core : {"8_8", "6_11", "8_13", "6_16", "8_18", "6_21", "8_23", "6_26", "8_28", "6_31", "10_36", "11_37"})
    EXPECT_NE(std::find(l.begin(), l.end(), core), l.end()) << core;
  expect_model_minimal(r.result.final, ex.prefixes);
  tr::ReplayOracle oracle(p, r.original.trace, kInputs, r.expectation);
  EXPECT_TRUE(dd::verify_n_minimal(r.result.final, oracle, 1));
}

TEST(ReduceTrace, SumAndMulFilters) {
  const auto p = tr::parse_program(sample_source());
  const auto sum = tr::reduce_trace(p, kInputs, {{"sum"}, {}});
  EXPECT_EQ(labels(sum.slice), (std::vector<std::string>{"8_8", "6_11", "8_13", "6_16", "8_18", "6_21", "8_23",
                                                          "6_26", "8_28", "6_31", "10_36"}));
  expect_model_minimal(sum.result.final, {"sum"});

  const auto mul = tr::reduce_trace(p, kInputs, {{"mul"}, {}});
  ASSERT_EQ(mul.slice.size(), 2u);
  EXPECT_EQ(mul.slice[0].line, 7);
  EXPECT_EQ(tr::event_label(mul.slice[1]), "11_37");
  expect_model_minimal(mul.result.final, {"mul"});
}

TEST(ReduceTrace, SumCoreIsTheSmallestWayToPrintFifteen) {
  // Exhaustive over the events that can affect `sum`: 1_1, 3_3, 6_x, 8_x.
  const auto model = SampleModel::trace(0, 5);
  std::vector<std::size_t> relevant;
  for (std::size_t i = 0; i < model.size(); ++i)
    if (model[i].line == 1 || model[i].line == 3 || model[i].line == 6 || model[i].line == 8) relevant.push_back(i);
  ASSERT_EQ(relevant.size(), 14u);
  std::size_t best = relevant.size() + 1, count_best = 0;
  for (unsigned m = 0; m < (1u << relevant.size()); ++m) {
    std::vector<bool> keep(model.size(), false);
    keep[35] = true;  // 10_36
    for (std::size_t k = 0; k < relevant.size(); ++k) keep[relevant[k]] = (m >> k) & 1u;
    if (SampleModel::replay(model, keep, {0, 5}).find("sum = 15\n") == std::string::npos) continue;
    const auto size = static_cast<std::size_t>(__builtin_popcount(m));
    if (size < best) best = size, count_best = 0;
    if (size == best) ++count_best;
  }
  EXPECT_EQ(best, 10u);
  EXPECT_EQ(count_best, 1u);
}

TEST(TraceFile, RoundTrip) {
  const auto p = tr::parse_program(sample_source());
  const auto run = tr::trace_program(p, kInputs);
  const auto text = tr::format_trace(run.trace);
  EXPECT_EQ(text.substr(0, 13), "1\t1\tstatement");
  EXPECT_EQ(tr::parse_trace(text), run.trace);
  EXPECT_THROW(tr::parse_trace("1\t1\tjump\n"), std::invalid_argument);
  EXPECT_THROW(tr::parse_trace("x\n"), std::invalid_argument);
}

TEST(SliceTable, ExcludedEventsLeaveTheColumnBlank) {
  const auto p = tr::parse_program(sample_source());
  const auto run = tr::trace_program(p, kInputs);
  const auto table = tr::render_slice_table(p, run.trace, Configuration(37, {36}));
  std::istringstream in(table);
  std::string header, first, last, line;
  std::getline(in, header);
  std::getline(in, first);
  while (std::getline(in, line)) last = line;
  EXPECT_NE(header.find("reduced"), std::string::npos);
  EXPECT_EQ(first.find("sum = 0;"), first.rfind("sum = 0;"));
  EXPECT_NE(last.find("print(\"mul = \""), last.rfind("print(\"mul = \""));
}

TEST(Parser, Errors) {
  EXPECT_THROW(tr::parse_program("x = ;"), tr::SyntaxError);
  EXPECT_THROW(tr::parse_program("x = 1"), tr::SyntaxError);
  EXPECT_THROW(tr::parse_program("x = 1; y = 2;"), tr::SyntaxError);  // two statements on one line
  EXPECT_THROW(tr::parse_program("while (1) {\n x = 1;\n} y = 2;"), tr::SyntaxError);
  EXPECT_THROW(tr::parse_program("print(\"open);"), tr::SyntaxError);
  try {
    tr::parse_program("x = 1;\ny = 2 +* 3;\n");
    FAIL();
  } catch (const tr::SyntaxError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.column, 8);  // the '*'
  }
}

TEST(Interpreter, ArithmeticAndFaults) {
  auto run = [](const std::string& src, std::vector<std::string> in = {}) {
    const auto p = tr::parse_program(src);
    return tr::trace_program(p, in, 10'000).output;
  };
  EXPECT_EQ(run("print(7 / 2, \" \", -7 / 2, \" \", 2 * 3 + 4, \" \", 1 < 2, \" \", 3 == 4);\n").stdout_text,
            "3 -3 10 1 0");
  EXPECT_EQ(run("x = 9223372036854775807;\nprint(x + 1);\n").stdout_text, "-9223372036854775808");
  EXPECT_EQ(run("print(1 / 0);\n").status, tr::Status::RuntimeError);
  EXPECT_EQ(run("x = input();\n", {"abc"}).status, tr::Status::RuntimeError);
  EXPECT_EQ(run("x = input();\n").status, tr::Status::RuntimeError);
  const auto hang = run("while (1) {\n  x = x + 1;\n}\n");
  EXPECT_EQ(hang.status, tr::Status::BudgetExhausted);
  EXPECT_EQ(hang.events_executed, 10'000u);
}

TEST(ReplayOracle, IncompleteReplaysAreUnresolved) {
  const auto p = tr::parse_program("a = input();\nb = 10 / a;\nprint(b, \"\\n\");\n");
  const std::vector<std::string> in{"2"};
  const auto run = tr::trace_program(p, in);
  ASSERT_EQ(run.output.stdout_text, "5\n");
  tr::ReplayOracle oracle(p, run.trace, in, {{}, "5\n"});
  EXPECT_EQ(oracle.evaluate(Configuration(3, {1, 2})).outcome, dd::Outcome::Unresolved);
  EXPECT_EQ(oracle.evaluate(Configuration::full(3)).outcome, dd::Outcome::Fail);
  EXPECT_EQ(oracle.evaluate(Configuration(3, {2})).outcome, dd::Outcome::Pass);
}
