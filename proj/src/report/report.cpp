#include "dd/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dd::report {

using nlohmann::json;

std::string render_log_line(const TestRecord& record, std::size_t universe_size) {
  std::string line;
  line.reserve(universe_size + 3);
  for (std::size_t i = 0; i < universe_size; ++i)
    line.push_back(i < record.config.bits() && record.config.test(i) ? '*' : '.');
  line.push_back(' ');
  line.push_back(outcome_char(record.outcome));
  if (record.cached) line.push_back('#');
  return line;
}

namespace {

CounterMatrix tally(const std::vector<TestEntry>& tests) {
  CounterMatrix m{};
  for (const auto& t : tests)
    ++m[static_cast<std::size_t>(t.source)][static_cast<std::size_t>(t.outcome)];
  return m;
}

std::vector<TestEntry> entries_of(const RunLog& log) {
  std::vector<TestEntry> out;
  out.reserve(log.size());
  for (const auto& r : log.records())
    out.push_back({r.config.to_hex(), r.granularity, r.outcome, r.cached, r.source, r.duration_ms});
  return out;
}

}  // namespace

ReportDocument make_report(std::size_t universe_size, const Configuration& final, const RunLog& log,
                           std::optional<bool> verified) {
  ReportDocument doc;
  doc.universe_size = universe_size;
  doc.final.assign(final.members().begin(), final.members().end());
  doc.tests = entries_of(log);
  doc.counters = tally(doc.tests);
  doc.ratio = universe_size == 0 ? 0.0
                                 : static_cast<double>(final.size()) / static_cast<double>(universe_size);
  doc.verified_1_minimal = verified;
  return doc;
}

ReportDocument make_partial_report(std::size_t universe_size, const RunLog& log) {
  ReportDocument doc;
  doc.universe_size = universe_size;
  doc.tests = entries_of(log);
  doc.counters = tally(doc.tests);
  return doc;
}

bool consistent(const ReportDocument& doc) {
  if (tally(doc.tests) != doc.counters) return false;
  const double expected = doc.universe_size == 0
                              ? 0.0
                              : static_cast<double>(doc.final.size()) / static_cast<double>(doc.universe_size);
  return doc.ratio == expected;
}

std::string to_json(const ReportDocument& doc, int indent) {
  json counters = json::object();
  for (std::size_t s = 0; s < kSourceCount; ++s) {
    json row = json::object();
    for (std::size_t o = 0; o < kOutcomeCount; ++o)
      row[std::string(outcome_name(static_cast<Outcome>(o)))] = doc.counters[s][o];
    counters[std::string(source_name(static_cast<Source>(s)))] = row;
  }
  json tests = json::array();
  for (const auto& t : doc.tests)
    tests.push_back({{"config", t.config},
                     {"granularity", t.granularity},
                     {"outcome", outcome_name(t.outcome)},
                     {"cached", t.cached},
                     {"source", source_name(t.source)},
                     {"duration_ms", t.duration_ms}});
  json j = {{"universe_size", doc.universe_size},
            {"final", doc.final},
            {"counters", counters},
            {"tests", tests},
            {"ratio", doc.ratio},
            {"verified_1_minimal", doc.verified_1_minimal ? json(*doc.verified_1_minimal) : json(nullptr)}};
  return j.dump(indent) + "\n";
}

ReportDocument from_json(const std::string& text) {
  const json j = json::parse(text);
  ReportDocument doc;
  doc.universe_size = j.at("universe_size").get<std::size_t>();
  doc.final = j.at("final").get<std::vector<DeltaId>>();
  for (const auto& [sname, row] : j.at("counters").items()) {
    const auto s = source_from_name(sname);
    if (!s) throw std::runtime_error("report: unknown counter source '" + sname + "'");
    for (const auto& [oname, value] : row.items()) {
      const auto o = outcome_from_name(oname);
      if (!o) throw std::runtime_error("report: unknown counter outcome '" + oname + "'");
      doc.counters[static_cast<std::size_t>(*s)][static_cast<std::size_t>(*o)] = value.get<std::size_t>();
    }
  }
  for (const auto& t : j.at("tests")) {
    TestEntry e;
    e.config = t.at("config").get<std::string>();
    e.granularity = t.at("granularity").get<std::size_t>();
    const auto o = outcome_from_name(t.at("outcome").get<std::string>());
    const auto s = source_from_name(t.at("source").get<std::string>());
    if (!o || !s) throw std::runtime_error("report: bad test entry");
    e.outcome = *o;
    e.source = *s;
    e.cached = t.at("cached").get<bool>();
    e.duration_ms = t.at("duration_ms").get<double>();
    doc.tests.push_back(std::move(e));
  }
  doc.ratio = j.at("ratio").get<double>();
  if (const auto& v = j.at("verified_1_minimal"); !v.is_null()) doc.verified_1_minimal = v.get<bool>();
  return doc;
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report '" + path.string() + "'");
  out << to_json(doc);
  if (!out) throw std::runtime_error("error writing report '" + path.string() + "'");
}

ReportDocument read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read report '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,tests_oracle,tests_cached,bound_quadratic,bound_log\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.tests_oracle << ',' << r.tests_cached << ',' << r.bound_quadratic << ','
        << r.bound_log << '\n';
}

}  // namespace dd::report
