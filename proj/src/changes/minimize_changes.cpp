#include "dd/changes.hpp"

namespace dd::changes {

namespace {

std::unique_ptr<TestOracle> with_constraints(const ChangeSet& set, std::unique_ptr<TestOracle>& inner,
                                             const ChangeMapper& mapper) {
  if (set.dependencies.empty()) return nullptr;
  return feasibility_filter(set, *inner, mapper);
}

}  // namespace

ChangeMinimization minimize_changes(const ChangeSet& set, const ChangeOracleFactory& factory,
                                    const std::optional<GroupedUniverse>& groups,
                                    const EngineOptions& opts) {
  ChangeMinimization out;
  const std::size_t n = set.changes.size();

  if (groups) {
    out.groups = groups;
    const GroupedUniverse& g = *out.groups;
    const ChangeMapper expand = [&g](const Configuration& c) { return g.expand(c); };
    auto inner = factory(expand);
    auto filtered = with_constraints(set, inner, expand);
    TestOracle& oracle = filtered ? *filtered : *inner;
    out.group_pass = ddmin(Configuration::full(g.size()), oracle, opts);
    const Configuration winners = g.expand(out.group_pass->final);
    out.member_universe.assign(winners.members().begin(), winners.members().end());
  } else {
    out.member_universe.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.member_universe[i] = i;
  }

  const auto& universe = out.member_universe;
  const ChangeMapper to_changes = [&universe, n](const Configuration& c) {
    std::vector<DeltaId> ids;
    ids.reserve(c.size());
    for (auto local : c.members()) ids.push_back(static_cast<DeltaId>(universe.at(local)));
    return Configuration(n, std::move(ids));
  };
  auto inner = factory(to_changes);
  auto filtered = with_constraints(set, inner, to_changes);
  TestOracle& oracle = filtered ? *filtered : *inner;
  out.member_pass = ddmin(Configuration::full(universe.size()), oracle, opts);
  for (auto local : out.member_pass.final.members()) out.final_changes.push_back(universe[local]);
  return out;
}

}  // namespace dd::changes

namespace dd::changes {

ChangeSet build_change_set(const Tree& baseline, std::string_view diff_text, std::vector<Dependency> deps) {
  ChangeSet set;
  set.changes = split_unified_diff(diff_text);
  check_acyclic(set.changes.size(), deps);
  set.dependencies = std::move(deps);
  set.baseline_digest = tree_digest(baseline);
  const ApplyResult full = apply_subset(baseline, set.changes, Configuration::full(set.changes.size()));
  if (const auto* c = std::get_if<Conflict>(&full))
    throw std::invalid_argument("diff does not apply to the baseline: change " + std::to_string(c->change) +
                                ": " + c->reason);
  set.target_digest = tree_digest(std::get<Tree>(full));
  return set;
}

}  // namespace dd::changes
