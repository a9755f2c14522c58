#include "prexsyn/props/fragments.hpp"

#include <algorithm>

#include "prexsyn/chem/canonical.hpp"
#include "prexsyn/util/mix.hpp"

namespace prexsyn::props {

bool FragmentSet::contains(std::uint32_t id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

bool FragmentSet::contains_all(const FragmentSet& other) const {
  return std::includes(ids.begin(), ids.end(), other.ids.begin(),
                       other.ids.end());
}

namespace {

constexpr std::uint64_t kFragmentSeed = 0xf2a6b7c8d9e0a1b2ULL;

std::vector<chem::MolGraph> decompose(const chem::MolGraph& m) {
  auto ring_atoms = chem::ring_atom_mask(m);
  auto ring_bonds = chem::ring_bond_mask(m);
  auto degrees = chem::heavy_degrees(m);

  std::vector<bool> cut(m.bonds.size(), false);
  bool any_cut = false;
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    const auto& b = m.bonds[bi];
    if (b.order != chem::BondOrder::Single || ring_bonds[bi]) continue;
    bool ring_to_chain =
        (ring_atoms[b.a] && !ring_atoms[b.b] && degrees[b.b] >= 2) ||
        (ring_atoms[b.b] && !ring_atoms[b.a] && degrees[b.a] >= 2);
    if (ring_to_chain) {
      cut[bi] = true;
      any_cut = true;
    }
  }
  if (!any_cut) return {m};

  // connected components of the cut graph, wildcard caps at cut ends
  std::vector<int> comp(m.atoms.size(), -1);
  chem::Adjacency adj(m);
  int n_comp = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = n_comp;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (const auto* e = adj.begin(u); e != adj.end(u); ++e) {
        if (cut[e->bond]) continue;
        if (comp[e->neighbor] < 0) {
          comp[e->neighbor] = n_comp;
          stack.push_back(e->neighbor);
        }
      }
    }
    ++n_comp;
  }

  std::vector<chem::MolGraph> pieces(n_comp);
  std::vector<int> remap(m.atoms.size(), -1);
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    remap[i] = static_cast<int>(pieces[comp[i]].atoms.size());
    pieces[comp[i]].atoms.push_back(m.atoms[i]);
  }
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    const auto& b = m.bonds[bi];
    if (cut[bi]) {
      // cap both open ends with a wildcard
      for (int end : {static_cast<int>(b.a), static_cast<int>(b.b)}) {
        auto& piece = pieces[comp[end]];
        int wild = static_cast<int>(piece.add_atom({chem::Element::Wild, false, 0}));
        piece.add_bond(remap[end], wild, chem::BondOrder::Single);
      }
      continue;
    }
    pieces[comp[b.a]].add_bond(remap[b.a], remap[b.b], b.order);
  }
  return pieces;
}

}  // namespace

std::vector<std::string> fragment_strings(const chem::MolGraph& m) {
  std::vector<std::string> out;
  for (const auto& piece : decompose(m))
    out.push_back(chem::canonicalize(piece).smiles);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t fragment_id(const std::string& canonical_fragment,
                          int table_size) {
  return static_cast<std::uint32_t>(
      hash_bytes(canonical_fragment.data(), canonical_fragment.size(),
                 kFragmentSeed) %
      static_cast<std::uint64_t>(table_size));
}

FragmentSet fragments(const chem::MolGraph& m, int table_size) {
  FragmentSet set;
  for (const auto& s : fragment_strings(m))
    set.ids.push_back(fragment_id(s, table_size));
  std::sort(set.ids.begin(), set.ids.end());
  set.ids.erase(std::unique(set.ids.begin(), set.ids.end()), set.ids.end());
  return set;
}

}  // namespace prexsyn::props
