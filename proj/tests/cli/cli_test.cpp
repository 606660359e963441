#include <gtest/gtest.h>

#include <csignal>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include <json.hpp>

#include "support/oracles.hpp"

#ifndef DDMIN_BIN
#error "DDMIN_BIN must name the ddmin executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddmin-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& rel) const { return dir_ / rel; }

  void write(const std::string& rel, const std::string& content, bool exec = false) const {
    fs::create_directories(path(rel).parent_path());
    std::ofstream(path(rel), std::ios::binary) << content;
    if (exec) fs::permissions(path(rel), fs::perms::owner_all);
  }

  std::string read(const std::string& rel) const {
    std::ifstream in(path(rel), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs ddmin inside the scratch directory; returns the exit status.
  int run(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(DDMIN_BIN) + "' " + args +
                            " > cli.out 2> cli.err";
    const int raw = std::system(cmd.c_str());
    if (out) *out = read("cli.out");
    if (err) *err = read("cli.err");
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  json report(const std::string& rel) const { return json::parse(read(rel)); }

  static std::size_t oracle_tests(const json& doc) {
    std::size_t n = 0;
    for (const auto& [outcome, count] : doc["counters"]["oracle"].items()) n += count.get<std::size_t>();
    return n;
  }

  fs::path dir_;
};

// Baseline with one file per change, the change replacing line 3.
void change_fixture(const Cli& t, const fs::path& base, std::size_t n, std::string& diff) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "m" + std::to_string(i) + ".txt";
    std::vector<std::string> lines{"one\n", "two\n", "three\n", "four\n", "five\n"};
    fs::create_directories(base);
    std::ofstream(base / name) << ddtest::join(lines);
    diff += ddtest::render_file_diff(name, lines, {{2, 1, {"changed " + std::to_string(i) + "\n"}}});
  }
  (void)t;
}

// Zombies count as dead: once reparented they wait for init to reap them.
bool alive(pid_t pid) {
  if (::kill(pid, 0) != 0) return false;
  std::ifstream stat("/proc/" + std::to_string(pid) + "/stat");
  std::string pid_field, comm, state;
  stat >> pid_field >> comm >> state;
  return state != "Z";
}

}  // namespace

TEST_F(Cli, MinimizeInputFindsTheSubstring) {
  std::string input;
  for (int i = 0; i < 300; ++i) input += "row " + std::to_string(i * 13) + "\n";
  ASSERT_NE(input.find("78"), std::string::npos);
  write("crash.txt", input);
  write("check.sh", "#!/bin/sh\ngrep -q 78 \"$1\"\n", true);
  std::string err;
  EXPECT_EQ(run("minimize-input --input crash.txt --test ./check.sh --report r.json", nullptr, &err), 0) << err;
  EXPECT_EQ(read("crash.txt.min"), "78");
  const auto doc = report("r.json");
  EXPECT_EQ(doc["final"].size(), 2u);
  EXPECT_TRUE(fs::exists(path("r.json.line")));
}

TEST_F(Cli, UsageErrorsExitOne) {
  write("in.txt", "x\n");
  EXPECT_EQ(run("minimize-input --input in.txt"), 1);
  EXPECT_EQ(run("minimize-input --test true"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("bench --oracle nope --sizes 4"), 1);
  EXPECT_EQ(run("minimize-input --input in.txt --test /nonexistent/tool"), 1);
}

TEST_F(Cli, AxiomViolationExitsTwo) {
  write("in.txt", "x\ny\n");
  write("never.sh", "#!/bin/sh\nexit 1\n", true);
  std::string err;
  EXPECT_EQ(run("minimize-input --input in.txt --test ./never.sh --report r.json", nullptr, &err), 2);
  EXPECT_NE(err.find("axiom"), std::string::npos);
  const auto doc = report("r.json.line");
  EXPECT_EQ(doc["counters"]["axiom"]["pass"], 2);
}

TEST_F(Cli, TestCommandAfterDoubleDash) {
  write("in.txt", "a\nneedle\nb\n");
  std::string err;
  EXPECT_EQ(run("minimize-input --input in.txt --granularity line -- /bin/sh -c 'grep -q needle \"$1\"' sh", nullptr,
                &err),
            0)
      << err;
  EXPECT_EQ(read("in.txt.min"), "needle\n");
}

TEST_F(Cli, MinimizeChangesEmitsTheCulpritHunk) {
  std::string diff;
  change_fixture(*this, path("base"), 8, diff);
  write("all.diff", diff);
  write("check.sh", "#!/bin/sh\ngrep -q 'changed 5' \"$1/m5.txt\"\n", true);
  std::string err;
  ASSERT_EQ(run("minimize-changes --baseline base --diff all.diff --test ./check.sh --report r.json", nullptr, &err), 0)
      << err;
  const std::string out = read("all.diff.min");
  EXPECT_NE(out.find("+changed 5\n"), std::string::npos);
  EXPECT_EQ(out.find("+changed 4\n"), std::string::npos);
  EXPECT_EQ(std::count(out.begin(), out.end(), '@') / 4, 1);
  EXPECT_EQ(report("r.json")["final"], json::array({5}));
}

TEST_F(Cli, DependencyChainDegeneratesToBinarySearch) {
  std::string diff;
  change_fixture(*this, path("base"), 8, diff);
  write("all.diff", diff);
  std::string deps;
  for (int i = 1; i < 8; ++i) deps += std::to_string(i) + "\t" + std::to_string(i - 1) + "\n";
  write("deps.tsv", deps);
  write("check.sh", "#!/bin/sh\ngrep -q 'changed 5' \"$1/m5.txt\"\n", true);
  ASSERT_EQ(run("minimize-changes --baseline base --diff all.diff --deps deps.tsv --test ./check.sh --report r.json"), 0);
  const auto doc = report("r.json");
  EXPECT_LE(oracle_tests(doc), 2u * 3u + 2u);
  std::size_t rejected = 0;
  for (const auto& [o, c] : doc["counters"]["feasibility-reject"].items()) rejected += c.get<std::size_t>();
  EXPECT_GT(rejected, 0u);
  EXPECT_EQ(doc["final"], json::array({0, 1, 2, 3, 4, 5}));
}

TEST_F(Cli, StackedConflictIsUnresolved) {
  write("base/f.txt", "a\nc\nd\n");
  write("stack.diff",
        "--- a/f.txt\n+++ b/f.txt\n@@ -1,3 +1,4 @@\n a\n+b\n c\n d\n"
        "--- a/f.txt\n+++ b/f.txt\n@@ -1,4 +1,4 @@\n a\n-b\n+B\n c\n d\n");
  write("check.sh", "#!/bin/sh\ngrep -q B \"$1/f.txt\"\n", true);
  ASSERT_EQ(run("minimize-changes --baseline base --diff stack.diff --test ./check.sh --report r.json"), 0);
  const auto doc = report("r.json");
  EXPECT_GT(doc["counters"]["oracle"]["unresolved"].get<int>(), 0);
  EXPECT_EQ(doc["final"], json::array({0, 1}));
}

TEST_F(Cli, GroupedRunWritesBothReports) {
  std::string diff;
  change_fixture(*this, path("base"), 6, diff);
  write("all.diff", diff);
  write("check.sh", "#!/bin/sh\ngrep -q 'changed 2' \"$1/m2.txt\"\n", true);
  ASSERT_EQ(run("minimize-changes --baseline base --diff all.diff --groups file --test ./check.sh --report r.json"), 0);
  EXPECT_EQ(report("r.json.groups")["universe_size"], 6);
  EXPECT_NE(read("all.diff.min").find("+changed 2"), std::string::npos);
}

TEST_F(Cli, ReduceTraceSlices) {
  fs::copy_file(fs::path(DD_SAMPLES_DIR) / "sample.prog", path("sample.prog"));
  std::string out;
  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin '0 5' --report all.json", &out), 0);
  EXPECT_EQ(report("all.json")["final"].size(), 13u);
  EXPECT_NE(out.find("reduced"), std::string::npos);
  const std::string trace = read("sample.prog.trace");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 37);

  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin 0,5 --filter sum --report sum.json"), 0);
  EXPECT_EQ(report("sum.json")["final"].size(), 11u);
  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin '0 5' --filter mul --expect 'mul = 0' --report mul.json"), 0);
  EXPECT_EQ(report("mul.json")["final"].size(), 2u);
}

TEST_F(Cli, VerboseLogHasOneLinePerTest) {
  fs::copy_file(fs::path(DD_SAMPLES_DIR) / "sample.prog", path("sample.prog"));
  std::string out;
  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin '0 5' --filter mul -v --report r.json -o table.txt", &out), 0);
  const auto doc = report("r.json");
  EXPECT_EQ(static_cast<std::size_t>(std::count(out.begin(), out.end(), '\n')), doc["tests"].size());
  EXPECT_EQ(out.substr(0, 39), std::string(37, '.') + " P");
}

TEST_F(Cli, DeterministicReportsAreByteIdentical) {
  fs::copy_file(fs::path(DD_SAMPLES_DIR) / "sample.prog", path("sample.prog"));
  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin '0 5' --deterministic-report --report a.json"), 0);
  ASSERT_EQ(run("reduce-trace --program sample.prog --stdin '0 5' --deterministic-report --report b.json"), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));

  write("in.txt", "q\nw\ne\nr\n");
  write("check.sh", "#!/bin/sh\ngrep -q e \"$1\"\n", true);
  ASSERT_EQ(run("minimize-input --input in.txt --test ./check.sh --deterministic-report --report c.json"), 0);
  ASSERT_EQ(run("minimize-input --input in.txt --test ./check.sh --deterministic-report --report d.json"), 0);
  EXPECT_EQ(read("c.json"), read("d.json"));
}

TEST_F(Cli, PersistedCacheAvoidsRerunningTests) {
  write("in.txt", "1\n2\n3\n4\n5\n6\n7\n8\n");
  // Counts its own invocations in a file outside the workspace.
  write("check.sh", "#!/bin/sh\necho x >> '" + path("calls").string() + "'\ngrep -q 6 \"$1\"\n", true);
  ASSERT_EQ(run("minimize-input --input in.txt --granularity line --test ./check.sh --cache c.tsv --report a.json"), 0);
  const auto first_calls = read("calls").size() / 2;
  EXPECT_GT(first_calls, 0u);
  ASSERT_EQ(run("minimize-input --input in.txt --granularity line --test ./check.sh --cache c.tsv --report b.json"), 0);
  EXPECT_EQ(read("calls").size() / 2, first_calls);
  EXPECT_EQ(oracle_tests(report("b.json")), 0u);
  EXPECT_EQ(read("in.txt.min"), "6\n");
}

TEST_F(Cli, CapturedOutputOfTheFinalFailingTest) {
  write("in.txt", "a\nb\nboom\n");
  write("check.sh", "#!/bin/sh\necho \"seen $(wc -l < \"$1\")\"\ngrep -q boom \"$1\"\n", true);
  ASSERT_EQ(run("minimize-input --input in.txt --granularity line --test ./check.sh --report r.json"), 0);
  EXPECT_EQ(read("r.json.stdout"), "seen 1\n");
}

TEST_F(Cli, BenchCsv) {
  std::string out, err;
  ASSERT_EQ(run("bench --oracle adversarial --sizes 4..64", &out, &err), 0) << err;
  EXPECT_EQ(out.substr(0, out.find('\n')), "n,tests_oracle,tests_cached,bound_quadratic,bound_log");
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 62);
  ASSERT_EQ(run("bench --oracle single --sizes 1024", &out), 0);
  std::istringstream rows(out);
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  EXPECT_EQ(row.substr(0, 5), "1024,");
  EXPECT_LE(std::stoul(row.substr(5)), 22u);
}

TEST_F(Cli, SignalTerminatesTheRunningTestTree) {
  write("in.txt", "a\nb\n");
  write("slow.sh", "#!/bin/sh\necho $$ > '" + path("child.pid").string() + "'\nsleep 60\n", true);
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    if (::chdir(dir_.c_str()) != 0) ::_exit(126);
    const int devnull = ::open("/dev/null", O_WRONLY);
    ::dup2(devnull, 2);
    ::execl(DDMIN_BIN, DDMIN_BIN, "minimize-input", "--input", "in.txt", "--test", "./slow.sh", nullptr);
    ::_exit(127);
  }
  for (int i = 0; i < 100 && !fs::exists(path("child.pid")); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  ASSERT_TRUE(fs::exists(path("child.pid")));
  const pid_t child = std::stoi(read("child.pid"));
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  EXPECT_FALSE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
  bool gone = false;
  for (int i = 0; i < 50 && !gone; ++i) {
    gone = !alive(child);
    if (!gone) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  EXPECT_TRUE(gone) << "test process " << child << " survived";
}
