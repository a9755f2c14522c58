#include "prexsyn/synth/universe.hpp"

#include <fstream>
#include <sstream>

#include "prexsyn/chem/smiles.hpp"
#include "prexsyn/util/errors.hpp"

namespace prexsyn::synth {

Library::Library(std::vector<BuildingBlock> blocks)
    : blocks_(std::move(blocks)) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].id != static_cast<int>(i))
      throw InvariantError("building-block ids must be dense from 0");
    if (!by_canonical_.emplace(blocks_[i].canonical, blocks_[i].id).second)
      throw InvariantError("duplicate canonical string in library: " +
                           blocks_[i].canonical);
  }
}

int Library::find_canonical(const std::string& canon) const {
  auto it = by_canonical_.find(canon);
  return it == by_canonical_.end() ? -1 : it->second;
}

Registry::Registry(std::vector<chem::ReactionTemplate> templates)
    : templates_(std::move(templates)) {
  if (!templates_.empty()) {
    min_arity_ = 99;
    for (std::size_t i = 0; i < templates_.size(); ++i) {
      if (templates_[i].id != static_cast<int>(i))
        throw InvariantError("template ids must be dense from 0");
      max_arity_ = std::max(max_arity_, templates_[i].arity);
      min_arity_ = std::min(min_arity_, templates_[i].arity);
    }
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

Library load_library(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open library file " + path.string());
  std::vector<BuildingBlock> blocks;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw IoError("library line " + std::to_string(line_no) +
                    ": expected `id<TAB>smiles`");
    BuildingBlock bb;
    bb.id = std::stoi(fields[0]);
    bb.graph = chem::parse_smiles(fields[1]);
    bb.canonical = chem::write_canonical(bb.graph);
    blocks.push_back(std::move(bb));
  }
  return Library(std::move(blocks));
}

void save_library(const Library& lib, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write library file " + path.string());
  for (const auto& bb : lib.blocks())
    out << bb.id << '\t' << bb.canonical << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

Registry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template file " + path.string());
  std::vector<chem::ReactionTemplate> templates;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() < 4)
      throw IoError("template line " + std::to_string(line_no) +
                    ": expected id, arity, patterns, bond_order");
    chem::ReactionTemplate t;
    t.id = std::stoi(fields[0]);
    t.arity = std::stoi(fields[1]);
    if (t.arity != 1 && t.arity != 2)
      throw IoError("template line " + std::to_string(line_no) +
                    ": arity must be 1 or 2");
    if (static_cast<int>(fields.size()) != 3 + t.arity)
      throw IoError("template line " + std::to_string(line_no) +
                    ": field count does not match arity");
    for (int s = 0; s < t.arity; ++s) {
      t.slot_sources.push_back(fields[2 + s]);
      t.slot_patterns.push_back(chem::parse_pattern(fields[2 + s]));
    }
    const std::string& order = fields.back();
    if (order == "single")
      t.bond_order = chem::BondOrder::Single;
    else if (order == "double")
      t.bond_order = chem::BondOrder::Double;
    else
      throw IoError("template line " + std::to_string(line_no) +
                    ": bond_order must be single or double");
    templates.push_back(std::move(t));
  }
  return Registry(std::move(templates));
}

void save_registry(const Registry& reg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write template file " + path.string());
  for (const auto& t : reg.templates()) {
    out << t.id << '\t' << t.arity;
    for (const auto& src : t.slot_sources) out << '\t' << src;
    out << '\t'
        << (t.bond_order == chem::BondOrder::Double ? "double" : "single")
        << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Universe load_universe(const std::filesystem::path& dir) {
  Universe u;
  u.library = load_library(dir / "library.tsv");
  u.registry = load_registry(dir / "templates.tsv");
  return u;
}

}  // namespace prexsyn::synth
