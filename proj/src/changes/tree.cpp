#include <fstream>
#include <sstream>

#include "dd/changes.hpp"
#include "dd/digest.hpp"

namespace dd::changes {

namespace fs = std::filesystem;

Tree load_tree(const fs::path& root) {
  if (!fs::is_directory(root)) throw std::runtime_error("'" + root.string() + "' is not a directory");
  Tree tree;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + entry.path().string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    tree.emplace(fs::relative(entry.path(), root).generic_string(), ss.str());
  }
  return tree;
}

void write_tree(const Tree& tree, const fs::path& root) {
  for (const auto& [rel, content] : tree) {
    const fs::path path = root / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

std::string tree_digest(const Tree& tree) {
  std::string buf;
  for (const auto& [path, content] : tree) {
    buf += path;
    buf.push_back('\0');
    buf += std::to_string(content.size());
    buf.push_back('\0');
    buf += content;
  }
  return sha256_hex(buf);
}

proc::MaterializeResult TreeMaterializer::materialize(const Configuration& config,
                                                      const fs::path& workspace) {
  const Configuration members = mapper_ ? mapper_(config) : config;
  auto applied = apply_subset(baseline_, set_.changes, members);
  if (auto* c = std::get_if<Conflict>(&applied))
    return proc::MaterializeResult::conflicted("change " + std::to_string(c->change) + ": " + c->reason);
  write_tree(std::get<Tree>(applied), workspace);
  return {true, {}, {fs::absolute(workspace).string()}};
}

}  // namespace dd::changes
