#include <stdexcept>

#include "dd/digest.hpp"
#include "dd/input.hpp"

namespace dd::input {

std::string_view granularity_name(Granularity g) {
  switch (g) {
    case Granularity::Line: return "line";
    case Granularity::Char: return "char";
    case Granularity::Byte: return "byte";
  }
  return "line";
}

std::optional<Granularity> parse_granularity(std::string_view s) {
  if (s == "line") return Granularity::Line;
  if (s == "char") return Granularity::Char;
  if (s == "byte") return Granularity::Byte;
  return std::nullopt;
}

std::vector<Granularity> parse_schedule(std::string_view s) {
  std::vector<Granularity> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    const auto g = parse_granularity(item);
    if (!g) throw std::invalid_argument("unknown granularity '" + std::string(item) + "'");
    out.push_back(*g);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty granularity schedule");
  return out;
}

InvalidUtf8::InvalidUtf8(std::size_t off)
    : std::runtime_error("input is not valid UTF-8 (byte offset " + std::to_string(off) +
                         "); use byte granularity"),
      offset(off) {}

namespace {

// Length of the UTF-8 scalar value starting at s[i], or 0 if malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  char32_t cp;
  if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xc0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3f);
  }
  // Reject overlong forms, surrogates and values past U+10FFFF.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return 0;
  return len;
}

}  // namespace

TokenizedInput tokenize(std::string_view bytes, Granularity granularity) {
  TokenizedInput t;
  t.granularity = granularity;
  t.source_digest = sha256_hex(bytes);
  switch (granularity) {
    case Granularity::Line: {
      std::size_t start = 0;
      while (start < bytes.size()) {
        const auto nl = bytes.find('\n', start);
        const auto end = nl == std::string_view::npos ? bytes.size() : nl + 1;
        t.tokens.emplace_back(bytes.substr(start, end - start));
        start = end;
      }
      break;
    }
    case Granularity::Char:
      for (std::size_t i = 0; i < bytes.size();) {
        const auto len = utf8_length(bytes, i);
        if (len == 0) throw InvalidUtf8(i);
        t.tokens.emplace_back(bytes.substr(i, len));
        i += len;
      }
      break;
    case Granularity::Byte:
      t.tokens.reserve(bytes.size());
      for (char ch : bytes) t.tokens.emplace_back(1, ch);
      break;
  }
  return t;
}

std::vector<Delta> TokenizedInput::deltas() const {
  std::vector<Delta> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out.push_back({static_cast<DeltaId>(i), tokens[i], i});
  return out;
}

std::string render(const TokenizedInput& input, const Configuration& config) {
  std::string out;
  for (auto id : config.members()) out += input.tokens.at(id);
  return out;
}

}  // namespace dd::input
