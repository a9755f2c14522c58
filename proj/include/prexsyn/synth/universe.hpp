#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "prexsyn/chem/canonical.hpp"
#include "prexsyn/chem/mol.hpp"
#include "prexsyn/chem/rxn.hpp"

namespace prexsyn::synth {

struct BuildingBlock {
  int id = -1;
  chem::MolGraph graph;
  std::string canonical;
};

class Library {
 public:
  Library() = default;
  explicit Library(std::vector<BuildingBlock> blocks);

  const BuildingBlock& block(int id) const { return blocks_.at(id); }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<BuildingBlock>& blocks() const { return blocks_; }
  int find_canonical(const std::string& canon) const;

 private:
  std::vector<BuildingBlock> blocks_;
  std::unordered_map<std::string, int> by_canonical_;
};

class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<chem::ReactionTemplate> templates);

  const chem::ReactionTemplate& rxn(int id) const { return templates_.at(id); }
  int size() const { return static_cast<int>(templates_.size()); }
  const std::vector<chem::ReactionTemplate>& templates() const {
    return templates_;
  }
  int max_arity() const { return max_arity_; }
  int min_arity() const { return min_arity_; }

 private:
  std::vector<chem::ReactionTemplate> templates_;
  int max_arity_ = 0;
  int min_arity_ = 0;
};

// Library file: one record per line, `id<TAB>smiles`, ids dense from 0.
Library load_library(const std::filesystem::path& path);
void save_library(const Library& lib, const std::filesystem::path& path);

// Template file: `id<TAB>arity<TAB>pattern1[<TAB>pattern2]<TAB>bond_order`.
Registry load_registry(const std::filesystem::path& path);
void save_registry(const Registry& reg, const std::filesystem::path& path);

struct Universe {
  Library library;
  Registry registry;
};

// Loads `library.tsv` and `templates.tsv` from a universe directory.
Universe load_universe(const std::filesystem::path& dir);

}  // namespace prexsyn::synth
