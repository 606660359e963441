#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dd/engine.hpp"
#include "dd/process.hpp"

namespace dd::input {

enum class Granularity { Line, Char, Byte };

std::string_view granularity_name(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view s);
/// Comma-separated list, e.g. "line,char".
std::vector<Granularity> parse_schedule(std::string_view s);

class InvalidUtf8 : public std::runtime_error {
public:
  explicit InvalidUtf8(std::size_t offset);
  std::size_t offset;
};

struct TokenizedInput {
  Granularity granularity = Granularity::Line;
  std::vector<std::string> tokens;
  std::string source_digest;

  std::size_t size() const noexcept { return tokens.size(); }
  Configuration full() const { return Configuration::full(tokens.size()); }
  std::vector<Delta> deltas() const;
};

/// Splits bytes into tokens whose concatenation is the input. Line tokens
/// keep their '\n'; char tokens are whole UTF-8 scalar values (InvalidUtf8
/// otherwise); byte tokens are single bytes.
TokenizedInput tokenize(std::string_view bytes, Granularity granularity);

/// Concatenation of the included tokens in id order.
std::string render(const TokenizedInput& input, const Configuration& config);

/// Builds the oracle for one pass.
using OracleFactory = std::function<std::unique_ptr<TestOracle>(const TokenizedInput&)>;

/// In-process oracle over the rendered candidate bytes.
OracleFactory predicate_oracle(std::function<Outcome(std::string_view)> predicate);

struct Pass {
  Granularity granularity;
  std::size_t input_bytes = 0;
  std::size_t tokens = 0;
  std::string output;
  MinimizationResult result;
};

struct InputMinimization {
  std::string minimal;
  std::vector<Pass> passes;
};

class PassAxiomViolation : public AxiomViolation {
public:
  PassAxiomViolation(std::size_t pass, Granularity g, const AxiomViolation& cause);
  std::size_t pass;
};

/// Runs ddmin once per schedule entry, each pass re-tokenizing the previous
/// pass's result.
InputMinimization minimize_input(std::string_view bytes, const OracleFactory& factory,
                                 std::span<const Granularity> schedule,
                                 const EngineOptions& opts = {});

/// Writes the rendered candidate to `<workspace>/<file_name>` and passes its
/// absolute path as the last argument of the test command.
class CandidateFileMaterializer final : public proc::Materializer {
public:
  CandidateFileMaterializer(TokenizedInput input, std::string file_name)
      : input_(std::move(input)), file_name_(std::move(file_name)) {}
  proc::MaterializeResult materialize(const Configuration& config,
                                      const std::filesystem::path& workspace) override;

private:
  TokenizedInput input_;
  std::string file_name_;
};

/// Factory running an external test command per candidate. Evidence of the
/// last pass's oracle stays reachable through `last_oracle`.
struct CommandFactory {
  proc::CommandOracleSpec spec;
  std::string file_name;

  OracleFactory factory();
  proc::CommandOracle* last_oracle() const { return state_->oracle.get(); }

private:
  struct State {
    std::unique_ptr<CandidateFileMaterializer> materializer;
    std::unique_ptr<proc::CommandOracle> oracle;
  };
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

}  // namespace dd::input
