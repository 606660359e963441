#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dd/engine.hpp"
#include "dd/process.hpp"

namespace dd::changes {

/// Relative path -> file bytes.
using Tree = std::map<std::string, std::string>;

Tree load_tree(const std::filesystem::path& root);
/// Writes every file of `tree` below `root` (creating directories).
void write_tree(const Tree& tree, const std::filesystem::path& root);
/// SHA-256 over the sorted (path, content) pairs.
std::string tree_digest(const Tree& tree);

/// Identity of a line across patch versions: origin 0 is the baseline file
/// (index = 0-based line number); origin k > 0 is the k-th change's new
/// lines (index into new_lines).
struct LineRef {
  std::uint32_t origin = 0;
  std::uint32_t index = 0;
  friend bool operator==(const LineRef&, const LineRef&) = default;
};

struct DiffLine {
  char op;           // ' ', '-', '+'
  std::string text;  // including '\n' unless the file lacks a final newline
};

/// A maximal run of changed lines, separated from its neighbours by at least
/// two unchanged lines. Runs closer than that are merged, the unchanged
/// line between them becoming part of the change.
struct AtomicChange {
  std::string file;
  /// 1-based line in the pre-image of this change's file section where the
  /// old lines start; for pure insertions, the line after which new lines go.
  std::size_t anchor = 0;
  std::vector<std::string> old_lines;
  std::vector<std::string> new_lines;
  std::optional<std::string> group_key;

  std::vector<DiffLine> lines;        // hunk body, for re-emitting as a diff
  std::size_t section = 0;            // nth appearance of `file` in the diff
  std::vector<LineRef> old_refs;      // identities of old_lines
  std::optional<LineRef> insert_after;  // pure insertions; nullopt = file start
  bool creates_file = false;
  bool deletes_file = false;
};

class DiffParseError : public std::runtime_error {
public:
  DiffParseError(std::size_t line, const std::string& what);
  std::size_t line;
};

/// Parses a unified diff (one or more file sections, `a/` `b/` prefixes
/// optional). A path appearing in several sections is treated as a patch
/// series: later sections are relative to the earlier ones.
std::vector<AtomicChange> split_unified_diff(std::string_view diff_text);

/// Re-emits changes as a unified diff with the hunk bodies they came from.
std::string render_diff(std::span<const AtomicChange> changes, std::span<const std::size_t> ids);

struct Conflict {
  std::size_t change = 0;
  std::string reason;
};

using ApplyResult = std::variant<Tree, Conflict>;

/// Applies the included changes to `baseline`. Each
/// change is located by the identity of its old lines (cumulative per-file
/// drift), and its old text must match exactly.
ApplyResult apply_subset(const Tree& baseline, std::span<const AtomicChange> changes,
                         const Configuration& config);

/// Same for an explicit list of change ids. The result does not depend on
/// the order of `order`: later sections of a patch series always go after
/// earlier ones.
ApplyResult apply_changes(const Tree& baseline, std::span<const AtomicChange> changes,
                          std::span<const std::size_t> order);

/// "i requires j" edges.
struct Dependency {
  std::size_t child;
  std::size_t parent;
};

struct ChangeSet {
  std::string baseline_digest;
  std::string target_digest;
  std::vector<AtomicChange> changes;
  std::vector<Dependency> dependencies;
};

/// Splits the diff, checks the dependency edges and records the digests of
/// the baseline and of the fully patched tree. Throws DiffParseError, or
/// std::invalid_argument when the full diff does not apply to `baseline`.
ChangeSet build_change_set(const Tree& baseline, std::string_view diff_text,
                           std::vector<Dependency> deps = {});

/// Throws std::invalid_argument if an edge is out of range or the relation
/// has a cycle.
void check_acyclic(std::size_t n_changes, std::span<const Dependency> deps);

/// Parses `CHILD<TAB>PARENT` lines. Blank lines and '#' comments are
/// skipped.
std::vector<Dependency> parse_dependency_tsv(std::string_view text);
/// Parses `CHANGE-ID<TAB>KEY` lines.
std::map<std::size_t, std::string> parse_group_tsv(std::string_view text);

/// True iff every included change has all its parents included.
bool is_closed(const Configuration& member_config, std::span<const Dependency> deps);

enum class GroupKind { File, Directory, Custom };

/// A coarser universe whose deltas are groups of changes.
struct GroupedUniverse {
  std::vector<std::string> keys;
  std::vector<std::vector<std::size_t>> members;
  std::size_t n_changes = 0;

  std::size_t size() const noexcept { return keys.size(); }
  /// Change-level configuration containing every member of the included
  /// groups.
  Configuration expand(const Configuration& group_config) const;
};

GroupedUniverse group_deltas(std::span<const AtomicChange> changes, GroupKind kind,
                             const std::map<std::size_t, std::string>* custom = nullptr);

/// Maps a configuration of some outer universe to change ids.
using ChangeMapper = std::function<Configuration(const Configuration&)>;

/// Decorator answering Unresolved (source Rejected) for configurations not
/// closed under the dependency edges; closed ones reach `inner`.
class FeasibilityFilter final : public TestOracle {
public:
  FeasibilityFilter(TestOracle& inner, std::vector<Dependency> deps, ChangeMapper mapper = {});
  Evaluation evaluate(const Configuration& config) override;
  std::size_t rejected() const noexcept { return rejected_; }

private:
  TestOracle& inner_;
  std::vector<Dependency> deps_;
  ChangeMapper mapper_;
  std::size_t rejected_ = 0;
};

std::unique_ptr<FeasibilityFilter> feasibility_filter(const ChangeSet& set, TestOracle& inner,
                                                      ChangeMapper mapper = {});

/// Writes apply_subset's tree into the workspace and passes the workspace
/// directory to the test command. Conflicts are reported without running.
class TreeMaterializer final : public proc::Materializer {
public:
  TreeMaterializer(const Tree& baseline, const ChangeSet& set, ChangeMapper mapper = {})
      : baseline_(baseline), set_(set), mapper_(std::move(mapper)) {}
  proc::MaterializeResult materialize(const Configuration& config,
                                      const std::filesystem::path& workspace) override;

private:
  const Tree& baseline_;
  const ChangeSet& set_;
  ChangeMapper mapper_;
};

/// Builds the oracle for configurations of an outer universe, given the
/// mapping from that universe to change ids.
using ChangeOracleFactory = std::function<std::unique_ptr<TestOracle>(const ChangeMapper&)>;

struct ChangeMinimization {
  std::optional<GroupedUniverse> groups;
  std::optional<MinimizationResult> group_pass;
  /// Change ids of the second-pass universe (all changes without grouping).
  std::vector<std::size_t> member_universe;
  MinimizationResult member_pass;
  std::vector<std::size_t> final_changes;
};

/// Optional group-level ddmin, then ddmin over the members of the winning
/// groups. Dependency constraints are enforced on the mapped change sets.
ChangeMinimization minimize_changes(const ChangeSet& set, const ChangeOracleFactory& factory,
                                    const std::optional<GroupedUniverse>& groups,
                                    const EngineOptions& opts = {});

}  // namespace dd::changes
