#include <algorithm>
#include <set>
#include <unordered_map>

#include "dd/changes.hpp"

namespace dd::changes {

namespace {

struct Line {
  LineRef ref;
  std::string text;
};

struct FileState {
  bool exists = false;
  bool created_here = false;
  std::vector<Line> lines;
};

std::vector<Line> split_file(const std::string& content) {
  std::vector<Line> out;
  std::size_t start = 0;
  std::uint32_t index = 0;
  while (start < content.size()) {
    const auto nl = content.find('\n', start);
    const auto end = nl == std::string::npos ? content.size() : nl + 1;
    out.push_back({{0, index++}, content.substr(start, end - start)});
    start = end;
  }
  return out;
}

std::string ref_name(const LineRef& r) {
  return r.origin == 0 ? "baseline line " + std::to_string(r.index + 1)
                       : "line " + std::to_string(r.index + 1) + " added by change " +
                             std::to_string(r.origin - 1);
}

std::optional<std::size_t> locate(const std::vector<Line>& lines, const LineRef& ref) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].ref == ref) return i;
  return std::nullopt;
}

std::optional<Conflict> apply_one(FileState& st, const AtomicChange& ch, std::size_t id) {
  auto conflict = [&](std::string why) {
    return Conflict{id, ch.file + ": " + std::move(why)};
  };
  if (ch.creates_file) {
    if (st.exists && !st.created_here) return conflict("file to be created already exists");
    st.exists = true;
    st.created_here = true;
  } else if (!st.exists) {
    return conflict("no such file");
  }

  std::vector<Line> replacement;
  replacement.reserve(ch.new_lines.size());
  for (std::size_t k = 0; k < ch.new_lines.size(); ++k)
    replacement.push_back({{static_cast<std::uint32_t>(id + 1), static_cast<std::uint32_t>(k)},
                           ch.new_lines[k]});

  std::size_t at;
  if (!ch.old_refs.empty()) {
    const auto first = locate(st.lines, ch.old_refs.front());
    if (!first) return conflict("context mismatch: " + ref_name(ch.old_refs.front()) + " not present");
    at = *first;
    if (at + ch.old_refs.size() > st.lines.size())
      return conflict("context mismatch: change runs past end of file");
    for (std::size_t k = 0; k < ch.old_refs.size(); ++k) {
      const Line& cur = st.lines[at + k];
      if (!(cur.ref == ch.old_refs[k]))
        return conflict("context mismatch: expected " + ref_name(ch.old_refs[k]) + " at line " +
                        std::to_string(at + k + 1));
      if (cur.text != ch.old_lines[k])
        return conflict("context mismatch: text differs at line " + std::to_string(at + k + 1));
    }
  } else if (ch.insert_after) {
    const auto prev = locate(st.lines, *ch.insert_after);
    if (!prev) return conflict("context mismatch: " + ref_name(*ch.insert_after) + " not present");
    at = *prev + 1;
  } else {
    at = 0;
  }
  const auto pos = st.lines.begin() + static_cast<std::ptrdiff_t>(at);
  st.lines.erase(pos, pos + static_cast<std::ptrdiff_t>(ch.old_refs.size()));
  st.lines.insert(st.lines.begin() + static_cast<std::ptrdiff_t>(at),
                  std::make_move_iterator(replacement.begin()),
                  std::make_move_iterator(replacement.end()));
  return std::nullopt;
}

}  // namespace

ApplyResult apply_changes(const Tree& baseline, std::span<const AtomicChange> changes,
                          std::span<const std::size_t> order) {
  std::map<std::string, FileState> files;
  std::set<std::size_t> included(order.begin(), order.end());

  // Changes of one section never overlap, so only the section order of a
  // patch series matters.
  std::vector<std::size_t> sorted(order.begin(), order.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](std::size_t a, std::size_t b) { return changes[a].section < changes[b].section; });

  for (const auto id : sorted) {
    const AtomicChange& ch = changes[id];
    auto [it, fresh] = files.try_emplace(ch.file);
    if (fresh) {
      if (auto b = baseline.find(ch.file); b != baseline.end()) {
        it->second.exists = true;
        it->second.lines = split_file(b->second);
      }
    }
    if (auto c = apply_one(it->second, ch, id)) return *c;
  }

  // A deletion section removes its file only once all of its changes are in.
  std::map<std::pair<std::string, std::size_t>, bool> deletion_complete;
  for (std::size_t id = 0; id < changes.size(); ++id) {
    if (!changes[id].deletes_file) continue;
    auto [it, _] = deletion_complete.try_emplace({changes[id].file, changes[id].section}, true);
    it->second = it->second && included.contains(id);
  }
  for (const auto& [key, complete] : deletion_complete) {
    if (!complete) continue;
    auto f = files.find(key.first);
    if (f != files.end() && f->second.lines.empty()) f->second.exists = false;
  }

  Tree out = baseline;
  for (const auto& [path, st] : files) {
    if (!st.exists) {
      out.erase(path);
      continue;
    }
    std::string content;
    for (const auto& l : st.lines) content += l.text;
    out[path] = std::move(content);
  }
  return out;
}

ApplyResult apply_subset(const Tree& baseline, std::span<const AtomicChange> changes,
                         const Configuration& config) {
  if (config.universe_size() != changes.size())
    throw std::invalid_argument("configuration universe does not match the change set");
  std::vector<std::size_t> order(config.members().begin(), config.members().end());
  return apply_changes(baseline, changes, order);
}

}  // namespace dd::changes
