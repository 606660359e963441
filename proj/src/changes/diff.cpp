#include <charconv>
#include <map>

#include "dd/changes.hpp"

namespace dd::changes {

DiffParseError::DiffParseError(std::size_t l, const std::string& what)
    : std::runtime_error("diff line " + std::to_string(l) + ": " + what), line(l) {}

namespace {

struct Section {
  struct Entry {
    std::size_t id;
    std::size_t pre_start;  // 0-based in the section's pre-image
    std::size_t old_len;
    std::size_t new_len;
  };
  std::vector<Entry> entries;
};

using SectionMap = std::map<std::string, std::vector<Section>>;

// Identity of line `pos` of the pre-image of `file`'s section `section`.
LineRef resolve(const SectionMap& sections, const std::string& file, std::size_t section,
                std::size_t pos) {
  while (section > 0) {
    const Section& prev = sections.at(file)[section - 1];
    std::ptrdiff_t shift = 0;
    for (const auto& e : prev.entries) {
      const auto new_start = static_cast<std::ptrdiff_t>(e.pre_start) + shift;
      if (static_cast<std::ptrdiff_t>(pos) < new_start) break;
      if (static_cast<std::ptrdiff_t>(pos) < new_start + static_cast<std::ptrdiff_t>(e.new_len)) {
        return {static_cast<std::uint32_t>(e.id + 1),
                static_cast<std::uint32_t>(static_cast<std::ptrdiff_t>(pos) - new_start)};
      }
      shift += static_cast<std::ptrdiff_t>(e.new_len) - static_cast<std::ptrdiff_t>(e.old_len);
    }
    pos = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pos) - shift);
    --section;
  }
  return {0, static_cast<std::uint32_t>(pos)};
}

std::string strip_path(std::string_view raw) {
  // "a/dir/file\t2024-01-01 ..." -> "dir/file"
  if (const auto tab = raw.find('\t'); tab != std::string_view::npos) raw = raw.substr(0, tab);
  while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\r')) raw.remove_suffix(1);
  if (raw == "/dev/null") return std::string(raw);
  if (raw.starts_with("a/") || raw.starts_with("b/")) raw.remove_prefix(2);
  return std::string(raw);
}

bool parse_range(std::string_view s, std::size_t& start, std::size_t& count) {
  const auto comma = s.find(',');
  const auto head = s.substr(0, comma);
  if (std::from_chars(head.data(), head.data() + head.size(), start).ec != std::errc{}) return false;
  count = 1;
  if (comma != std::string_view::npos) {
    const auto tail = s.substr(comma + 1);
    const auto r = std::from_chars(tail.data(), tail.data() + tail.size(), count);
    if (r.ec != std::errc{} || r.ptr != tail.data() + tail.size()) return false;
  }
  return true;
}

struct HunkHeader {
  std::size_t old_start, old_count, new_start, new_count;
};

std::optional<HunkHeader> parse_hunk_header(std::string_view line) {
  // @@ -a,b +c,d @@ optional section text
  if (!line.starts_with("@@ -")) return std::nullopt;
  line.remove_prefix(4);
  const auto space = line.find(' ');
  if (space == std::string_view::npos) return std::nullopt;
  HunkHeader h{};
  if (!parse_range(line.substr(0, space), h.old_start, h.old_count)) return std::nullopt;
  line.remove_prefix(space + 1);
  if (!line.starts_with('+')) return std::nullopt;
  line.remove_prefix(1);
  const auto end = line.find(" @@");
  if (end == std::string_view::npos) return std::nullopt;
  if (!parse_range(line.substr(0, end), h.new_start, h.new_count)) return std::nullopt;
  return h;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::vector<AtomicChange> split_unified_diff(std::string_view diff_text) {
  const auto lines = split_lines(diff_text);
  std::vector<AtomicChange> changes;
  SectionMap sections;

  std::size_t i = 0;
  while (i < lines.size()) {
    if (!lines[i].starts_with("--- ")) {
      if (lines[i].starts_with("@@"))
        throw DiffParseError(i + 1, "hunk outside of a file section");
      ++i;
      continue;
    }
    const std::string old_path = strip_path(lines[i].substr(4));
    if (i + 1 >= lines.size() || !lines[i + 1].starts_with("+++ "))
      throw DiffParseError(i + 2, "expected '+++ ' after '--- '");
    const std::string new_path = strip_path(lines[i + 1].substr(4));
    if (old_path == "/dev/null" && new_path == "/dev/null")
      throw DiffParseError(i + 1, "both sides are /dev/null");
    const bool creates = old_path == "/dev/null";
    const bool deletes = new_path == "/dev/null";
    const std::string file = deletes ? old_path : new_path;
    if (file.empty()) throw DiffParseError(i + 1, "empty file name");
    i += 2;

    auto& file_sections = sections[file];
    const std::size_t section = file_sections.size();
    file_sections.emplace_back();

    while (i < lines.size() && lines[i].starts_with("@@")) {
      const auto header = parse_hunk_header(lines[i]);
      if (!header) throw DiffParseError(i + 1, "malformed hunk header");
      ++i;

      std::vector<DiffLine> body;
      std::size_t old_seen = 0, new_seen = 0;
      while (old_seen < header->old_count || new_seen < header->new_count) {
        if (i >= lines.size()) throw DiffParseError(i, "hunk ends early");
        std::string_view l = lines[i];
        char op = l.empty() ? ' ' : l.front();
        if (op == '\\') {
          if (body.empty()) throw DiffParseError(i + 1, "stray no-newline marker");
          body.back().text.pop_back();
          ++i;
          continue;
        }
        if (op != ' ' && op != '-' && op != '+')
          throw DiffParseError(i + 1, "unexpected line in hunk body");
        if (op != '+') ++old_seen;
        if (op != '-') ++new_seen;
        if (old_seen > header->old_count || new_seen > header->new_count)
          throw DiffParseError(i + 1, "hunk body longer than its header");
        std::string text(l.empty() ? l : l.substr(1));
        text.push_back('\n');
        body.push_back({op, std::move(text)});
        ++i;
      }
      if (i < lines.size() && lines[i].starts_with("\\")) {
        if (body.empty()) throw DiffParseError(i + 1, "stray no-newline marker");
        body.back().text.pop_back();
        ++i;
      }

      // Pre-image position of each body line.
      std::size_t pre = header->old_count == 0 ? header->old_start : header->old_start - 1;
      if (header->old_count != 0 && header->old_start == 0)
        throw DiffParseError(i, "hunk with old lines starts at line 0");
      std::vector<std::size_t> pre_pos(body.size());
      for (std::size_t k = 0; k < body.size(); ++k) {
        pre_pos[k] = pre;
        if (body[k].op != '+') ++pre;
      }

      // Maximal runs of changed lines; gaps of fewer than two context lines
      // are absorbed into one change.
      std::vector<std::pair<std::size_t, std::size_t>> runs;
      for (std::size_t k = 0; k < body.size();) {
        if (body[k].op == ' ') {
          ++k;
          continue;
        }
        std::size_t e = k;
        while (e < body.size() && body[e].op != ' ') ++e;
        if (!runs.empty() && k - runs.back().second < 2)
          runs.back().second = e;
        else
          runs.emplace_back(k, e);
        k = e;
      }

      for (const auto& [s, e] : runs) {
        AtomicChange ch;
        ch.file = file;
        ch.section = section;
        ch.creates_file = creates;
        ch.deletes_file = deletes;
        ch.lines.assign(body.begin() + static_cast<std::ptrdiff_t>(s),
                        body.begin() + static_cast<std::ptrdiff_t>(e));
        for (const auto& dl : ch.lines) {
          if (dl.op != '+') ch.old_lines.push_back(dl.text);
          if (dl.op != '-') ch.new_lines.push_back(dl.text);
        }
        const std::size_t start = pre_pos[s];
        ch.anchor = ch.old_lines.empty() ? start : start + 1;
        for (std::size_t k = 0; k < ch.old_lines.size(); ++k)
          ch.old_refs.push_back(resolve(sections, file, section, start + k));
        if (ch.old_lines.empty() && start > 0)
          ch.insert_after = resolve(sections, file, section, start - 1);

        file_sections[section].entries.push_back(
            {changes.size(), start, ch.old_lines.size(), ch.new_lines.size()});
        changes.push_back(std::move(ch));
      }
    }
  }
  return changes;
}

std::string render_diff(std::span<const AtomicChange> changes, std::span<const std::size_t> ids) {
  std::string out;
  const AtomicChange* open = nullptr;
  std::ptrdiff_t drift = 0;
  for (const auto id : ids) {
    const AtomicChange& ch = changes[id];
    if (open == nullptr || open->file != ch.file || open->section != ch.section) {
      out += "--- " + (ch.creates_file ? std::string("/dev/null") : "a/" + ch.file) + "\n";
      out += "+++ " + (ch.deletes_file ? std::string("/dev/null") : "b/" + ch.file) + "\n";
      drift = 0;
    }
    open = &ch;
    const auto b = ch.old_lines.size();
    const auto d = ch.new_lines.size();
    const auto a = static_cast<std::ptrdiff_t>(ch.anchor);
    std::ptrdiff_t c;
    if (b > 0)
      c = d > 0 ? a + drift : a + drift - 1;
    else
      c = d > 0 ? a + drift + 1 : a + drift;
    out += "@@ -" + std::to_string(a) + "," + std::to_string(b) + " +" + std::to_string(c) + "," +
           std::to_string(d) + " @@\n";
    for (const auto& dl : ch.lines) {
      out.push_back(dl.op);
      out += dl.text;
      if (dl.text.empty() || dl.text.back() != '\n') out += "\n\\ No newline at end of file\n";
    }
    drift += static_cast<std::ptrdiff_t>(d) - static_cast<std::ptrdiff_t>(b);
  }
  return out;
}

}  // namespace dd::changes
