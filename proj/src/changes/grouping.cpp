#include <charconv>

#include "dd/changes.hpp"

namespace dd::changes {

namespace {

template <typename Fn>
void for_each_tsv_row(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected two tab-separated fields");
    fn(line_no, line.substr(0, tab), line.substr(tab + 1));
  }
}

std::size_t parse_id(std::size_t line_no, std::string_view s) {
  std::size_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + std::string(s) +
                                "' is not a change id");
  return v;
}

}  // namespace

std::vector<Dependency> parse_dependency_tsv(std::string_view text) {
  std::vector<Dependency> deps;
  for_each_tsv_row(text, [&](std::size_t n, std::string_view a, std::string_view b) {
    deps.push_back({parse_id(n, a), parse_id(n, b)});
  });
  return deps;
}

std::map<std::size_t, std::string> parse_group_tsv(std::string_view text) {
  std::map<std::size_t, std::string> groups;
  for_each_tsv_row(text, [&](std::size_t n, std::string_view a, std::string_view b) {
    groups[parse_id(n, a)] = std::string(b);
  });
  return groups;
}

void check_acyclic(std::size_t n_changes, std::span<const Dependency> deps) {
  std::vector<std::vector<std::size_t>> parents(n_changes);
  for (const auto& d : deps) {
    if (d.child >= n_changes || d.parent >= n_changes)
      throw std::invalid_argument("dependency " + std::to_string(d.child) + " -> " +
                                  std::to_string(d.parent) + " refers to an unknown change");
    parents[d.child].push_back(d.parent);
  }
  // Iterative DFS with colours: 0 unvisited, 1 on stack, 2 done.
  std::vector<int> colour(n_changes, 0);
  for (std::size_t root = 0; root < n_changes; ++root) {
    if (colour[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < parents[node].size()) {
        const std::size_t p = parents[node][next++];
        if (colour[p] == 1)
          throw std::invalid_argument("dependency cycle through change " + std::to_string(p));
        if (colour[p] == 0) {
          colour[p] = 1;
          stack.emplace_back(p, 0);
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
  }
}

bool is_closed(const Configuration& member_config, std::span<const Dependency> deps) {
  for (const auto& d : deps)
    if (member_config.contains(static_cast<DeltaId>(d.child)) &&
        !member_config.contains(static_cast<DeltaId>(d.parent)))
      return false;
  return true;
}

Configuration GroupedUniverse::expand(const Configuration& group_config) const {
  std::vector<DeltaId> ids;
  for (auto g : group_config.members())
    for (auto m : members.at(g)) ids.push_back(static_cast<DeltaId>(m));
  return Configuration(n_changes, std::move(ids));
}

GroupedUniverse group_deltas(std::span<const AtomicChange> changes, GroupKind kind,
                             const std::map<std::size_t, std::string>* custom) {
  GroupedUniverse g;
  g.n_changes = changes.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t id = 0; id < changes.size(); ++id) {
    std::string key;
    switch (kind) {
      case GroupKind::File:
        key = changes[id].file;
        break;
      case GroupKind::Directory: {
        key = std::filesystem::path(changes[id].file).parent_path().generic_string();
        if (key.empty()) key = ".";
        break;
      }
      case GroupKind::Custom: {
        if (custom == nullptr) throw std::invalid_argument("custom grouping needs a group map");
        const auto it = custom->find(id);
        if (it == custom->end())
          throw std::invalid_argument("group map has no entry for change " + std::to_string(id));
        key = it->second;
        break;
      }
    }
    auto [it, fresh] = index.try_emplace(key, g.keys.size());
    if (fresh) {
      g.keys.push_back(key);
      g.members.emplace_back();
    }
    g.members[it->second].push_back(id);
  }
  return g;
}

FeasibilityFilter::FeasibilityFilter(TestOracle& inner, std::vector<Dependency> deps, ChangeMapper mapper)
    : inner_(inner), deps_(std::move(deps)), mapper_(std::move(mapper)) {}

Evaluation FeasibilityFilter::evaluate(const Configuration& config) {
  const bool closed = mapper_ ? is_closed(mapper_(config), deps_) : is_closed(config, deps_);
  if (!closed) {
    ++rejected_;
    return {Outcome::Unresolved, Source::Rejected};
  }
  return inner_.evaluate(config);
}

std::unique_ptr<FeasibilityFilter> feasibility_filter(const ChangeSet& set, TestOracle& inner,
                                                      ChangeMapper mapper) {
  check_acyclic(set.changes.size(), set.dependencies);
  return std::make_unique<FeasibilityFilter>(inner, set.dependencies, std::move(mapper));
}

}  // namespace dd::changes
