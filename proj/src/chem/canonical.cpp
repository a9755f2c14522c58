#include "prexsyn/chem/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>

#include "prexsyn/chem/smiles.hpp"

namespace prexsyn::chem {

namespace {

using Labels = std::vector<std::uint32_t>;

Labels initial_labels(const MolGraph& m, const Adjacency& adj) {
  auto hyd = implicit_hydrogens(m, adj);
  using Key = std::tuple<int, int, int, int, int>;
  std::vector<Key> keys(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const Atom& a = m.atoms[i];
    keys[i] = {static_cast<int>(a.element), a.aromatic ? 1 : 0, a.charge,
               adj.degree(i), hyd[i]};
  }
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Labels labels(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    labels[i] = static_cast<std::uint32_t>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i]) -
        sorted.begin());
  return labels;
}

std::size_t distinct(const Labels& labels) {
  Labels copy = labels;
  std::sort(copy.begin(), copy.end());
  return std::unique(copy.begin(), copy.end()) - copy.begin();
}

// One refinement sweep: relabel by (label, sorted multiset of
// (bond order, neighbor label)).
Labels refine_once(const MolGraph& m, const Adjacency& adj,
                   const Labels& labels) {
  using Key = std::pair<std::uint32_t, std::vector<std::uint64_t>>;
  std::vector<Key> keys(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    std::vector<std::uint64_t> nbrs;
    for (const auto* e = adj.begin(i); e != adj.end(i); ++e)
      nbrs.push_back((std::uint64_t(m.bonds[e->bond].order) << 32) |
                     labels[e->neighbor]);
    std::sort(nbrs.begin(), nbrs.end());
    keys[i] = {labels[i], std::move(nbrs)};
  }
  std::vector<const Key*> ptrs(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) ptrs[i] = &keys[i];
  std::sort(ptrs.begin(), ptrs.end(),
            [](const Key* a, const Key* b) { return *a < *b; });
  Labels out(keys.size());
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    if (i > 0 && *ptrs[i] != *ptrs[i - 1]) ++next;
    out[ptrs[i] - keys.data()] = next;
  }
  return out;
}

Labels refine(const MolGraph& m, const Adjacency& adj, Labels labels) {
  std::size_t cells = distinct(labels);
  while (cells < m.atoms.size()) {
    Labels next = refine_once(m, adj, labels);
    std::size_t next_cells = distinct(next);
    if (next_cells == cells) return next;
    labels = std::move(next);
    cells = next_cells;
  }
  return labels;
}

struct Search {
  const MolGraph& mol;
  const Adjacency& adj;
  std::string best;
  std::vector<int> best_order;
  bool have_best = false;

  void leaf(const Labels& labels) {
    std::vector<int> ranks(labels.begin(), labels.end());
    std::vector<int> emission;
    std::string s = write_smiles_ordered(mol, ranks, &emission);
    if (!have_best || s < best) {
      best = std::move(s);
      best_order = std::move(emission);
      have_best = true;
    }
  }

  void descend(Labels labels) {
    labels = refine(mol, adj, std::move(labels));
    if (distinct(labels) == mol.atoms.size()) {
      leaf(labels);
      return;
    }
    // smallest tied label class
    std::map<std::uint32_t, int> count;
    for (auto l : labels) ++count[l];
    std::uint32_t target = 0;
    for (const auto& [label, c] : count)
      if (c > 1) {
        target = label;
        break;
      }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != target) continue;
      Labels branched = labels;
      for (auto& l : branched) l = 2 * l + 1;
      branched[i] -= 1;  // individualize: strictly smaller, unique
      descend(std::move(branched));
    }
  }
};

}  // namespace

Canonical canonicalize(const MolGraph& m) {
  if (m.atoms.empty()) return {"", {}};
  Adjacency adj(m);
  Search search{m, adj};
  search.descend(initial_labels(m, adj));
  return {std::move(search.best), std::move(search.best_order)};
}

std::string write_canonical(const MolGraph& m) { return canonicalize(m).smiles; }

std::vector<int> canonical_ranks(const MolGraph& m) {
  return canonicalize(m).ranks;
}

}  // namespace prexsyn::chem
