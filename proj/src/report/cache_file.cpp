#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dd/report.hpp"

namespace dd::report {

namespace {

char cache_char(Outcome o) {
  switch (o) {
    case Outcome::Fail: return 'F';
    case Outcome::Pass: return 'P';
    case Outcome::Unresolved: return 'U';
  }
  return 'U';
}

std::string cache_line(const Bitmap& key, Outcome o) {
  std::string line = key.to_hex();
  line.push_back('\t');
  line.push_back(cache_char(o));
  line.push_back('\n');
  return line;
}

}  // namespace

void write_cache(const CacheEntries& entries, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write cache '" + path.string() + "'");
  for (const auto& [key, outcome] : entries) out << cache_line(key, outcome);
  if (!out) throw std::runtime_error("error writing cache '" + path.string() + "'");
}

CacheReadResult read_cache(const std::filesystem::path& path, std::size_t universe_size) {
  CacheReadResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return result;
    throw std::runtime_error("cannot read cache '" + path.string() + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto warn = [&](const std::string& why) {
      result.warnings.push_back(path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 2 != line.size()) {
      warn("expected '<hex>\\t<F|P|U>'");
      continue;
    }
    Outcome outcome;
    switch (line[tab + 1]) {
      case 'F': outcome = Outcome::Fail; break;
      case 'P': outcome = Outcome::Pass; break;
      case 'U': outcome = Outcome::Unresolved; break;
      default: warn("unknown outcome letter"); continue;
    }
    try {
      result.entries.emplace_back(Bitmap::from_hex(std::string_view(line).substr(0, tab), universe_size),
                                  outcome);
    } catch (const std::invalid_argument& e) {
      warn(e.what());
    }
  }
  return result;
}

CacheAppender::CacheAppender(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "ab");
  if (file_ == nullptr)
    throw std::runtime_error("cannot open cache '" + path.string() + "': " + std::strerror(errno));
}

CacheAppender::~CacheAppender() {
  if (file_ != nullptr) std::fclose(file_);
}

void CacheAppender::append(const Bitmap& key, Outcome outcome) {
  const std::string line = cache_line(key, outcome);
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0)
    throw std::runtime_error("error appending to cache '" + path_.string() + "'");
}

}  // namespace dd::report
