#include <fstream>

#include "dd/input.hpp"

namespace dd::input {

namespace fs = std::filesystem;

PassAxiomViolation::PassAxiomViolation(std::size_t p, Granularity g, const AxiomViolation& cause)
    : AxiomViolation("pass " + std::to_string(p + 1) + " (" + std::string(granularity_name(g)) +
                         "): " + cause.what(),
                     cause.log),
      pass(p) {}

OracleFactory predicate_oracle(std::function<Outcome(std::string_view)> predicate) {
  return [predicate = std::move(predicate)](const TokenizedInput& input) -> std::unique_ptr<TestOracle> {
    return std::make_unique<FunctionOracle>(
        [&input, predicate](const Configuration& c) { return predicate(render(input, c)); });
  };
}

InputMinimization minimize_input(std::string_view bytes, const OracleFactory& factory,
                                 std::span<const Granularity> schedule, const EngineOptions& opts) {
  InputMinimization out;
  out.minimal = std::string(bytes);
  for (std::size_t p = 0; p < schedule.size(); ++p) {
    const TokenizedInput tokens = tokenize(out.minimal, schedule[p]);
    auto oracle = factory(tokens);
    Pass pass{schedule[p], out.minimal.size(), tokens.size(), {}, {}};
    try {
      pass.result = ddmin(tokens.full(), *oracle, opts);
    } catch (const AxiomViolation& e) {
      throw PassAxiomViolation(p, schedule[p], e);
    }
    pass.output = render(tokens, pass.result.final);
    out.minimal = pass.output;
    out.passes.push_back(std::move(pass));
  }
  return out;
}

proc::MaterializeResult CandidateFileMaterializer::materialize(const Configuration& config,
                                                               const fs::path& workspace) {
  const fs::path file = workspace / file_name_;
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  const std::string bytes = render(input_, config);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write candidate '" + file.string() + "'");
  return {true, {}, {fs::absolute(file).string()}};
}

namespace {
class ForwardingOracle final : public TestOracle {
public:
  explicit ForwardingOracle(TestOracle& target) : target_(target) {}
  Evaluation evaluate(const Configuration& c) override { return target_.evaluate(c); }

private:
  TestOracle& target_;
};
}  // namespace

OracleFactory CommandFactory::factory() {
  return [state = state_, spec = spec, name = file_name](const TokenizedInput& input) -> std::unique_ptr<TestOracle> {
    state->oracle.reset();
    state->materializer = std::make_unique<CandidateFileMaterializer>(input, name);
    state->oracle = std::make_unique<proc::CommandOracle>(spec, *state->materializer);
    return std::make_unique<ForwardingOracle>(*state->oracle);
  };
}

}  // namespace dd::input
