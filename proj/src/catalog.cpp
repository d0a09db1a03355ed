#include "subf/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace subf {

namespace fs = std::filesystem;

std::string Catalog::default_dir() {
  if (const char* env = std::getenv("SUBF_CATALOG_DIR"); env && *env) return env;
#ifdef SUBF_SOURCE_CATALOG_DIR
  return SUBF_SOURCE_CATALOG_DIR;
#else
  return "catalog";
#endif
}

Catalog Catalog::load(const std::string& dir) {
  Catalog catalog;
  if (!fs::exists(dir))
    throw CatalogError("catalog directory '" + dir + "' does not exist");
  for (const auto& sub : fs::directory_iterator(dir)) {
    if (!sub.is_directory()) continue;
    for (const auto& file : fs::directory_iterator(sub.path())) {
      if (file.path().extension() != ".cayley") continue;
      std::ifstream in(file.path());
      std::stringstream buf;
      buf << in.rdbuf();
      std::string text = buf.str();

      CatalogEntry entry;
      entry.path = file.path().string();
      // Metadata comments: "# name: ..." and "# id: <order>.<id>".
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        if (line.rfind("# name:", 0) == 0) {
          auto b = line.find_first_not_of(" \t", 7);
          if (b != std::string::npos) entry.name = line.substr(b);
        } else if (line.rfind("# id:", 0) == 0) {
          auto b = line.find_first_not_of(" \t", 5);
          if (b != std::string::npos) {
            auto dot = line.find('.', b);
            if (dot == std::string::npos)
              throw CatalogError("bad id line in " + entry.path);
            entry.order = std::stoi(line.substr(b, dot - b));
            entry.id = std::stoi(line.substr(dot + 1));
          }
        }
      }
      try {
        entry.group = std::make_unique<FiniteGroup>(load_cayley_table(text));
      } catch (const Error& e) {
        throw CatalogError("invalid catalog file " + entry.path + ": " + e.what());
      }
      if (entry.order == 0) entry.order = entry.group->order();
      if (entry.order != entry.group->order())
        throw CatalogError("declared order disagrees with the table in " + entry.path);
      if (entry.name.empty()) entry.name = file.path().stem().string();
      entry.group->set_spec(entry.name);
      catalog.entries_.push_back(std::move(entry));
    }
  }
  std::sort(catalog.entries_.begin(), catalog.entries_.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) {
              return a.order != b.order ? a.order < b.order : a.id < b.id;
            });
  return catalog;
}

std::vector<const CatalogEntry*> Catalog::up_to_order(int max_order) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries_)
    if (e.order <= max_order) out.push_back(&e);
  return out;
}

const CatalogEntry* Catalog::find(int order, int id) const {
  for (const auto& e : entries_)
    if (e.order == order && e.id == id) return &e;
  return nullptr;
}

const CatalogEntry* Catalog::find_by_name(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

void Catalog::require_complete(int max_order) const {
  if (max_order > 16) throw CatalogError("catalog covers orders 1..16 only");
  std::array<int, 17> counts{};
  for (const auto& e : entries_)
    if (e.order <= max_order) ++counts[e.order];
  for (int n = 1; n <= max_order; ++n) {
    if (counts[n] != kGroupCountByOrder[n])
      throw CatalogError("catalog incomplete: order " + std::to_string(n) + " has " +
                         std::to_string(counts[n]) + " groups, expected " +
                         std::to_string(kGroupCountByOrder[n]));
  }
}

}  // namespace subf
