#pragma once

// Test-only helpers: random molecule generation, relabeling, and brute-force
// oracles kept independent of the library's matching/canonicalization paths.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "prexsyn/chem/mol.hpp"
#include "prexsyn/chem/pattern.hpp"

namespace prexsyn::test {

using chem::Adjacency;
using chem::Atom;
using chem::BondOrder;
using chem::Element;
using chem::MolGraph;

// Random connected molecule: spanning tree plus occasional ring edges and
// bond-order upgrades, with valences kept legal by construction.
inline MolGraph random_molecule(std::mt19937_64& rng, int n_atoms) {
  static const Element kPool[] = {Element::C, Element::C, Element::C,
                                  Element::C, Element::N, Element::O,
                                  Element::S, Element::F, Element::Cl};
  MolGraph m;
  std::vector<int> capacity;
  for (int i = 0; i < n_atoms; ++i) {
    Element e = kPool[rng() % std::size(kPool)];
    if (i < 2 && chem::default_valence(e) < 2) e = Element::C;
    m.add_atom({e, false, 0});
    capacity.push_back(chem::default_valence(e));
  }
  for (int i = 1; i < n_atoms; ++i) {
    std::vector<int> parents;
    for (int j = 0; j < i; ++j)
      if (capacity[j] >= 1) parents.push_back(j);
    if (parents.empty()) {
      // fall back: widen a previous atom
      m.atoms[0].element = Element::C;
      capacity[0] = 4;
      parents.push_back(0);
    }
    int p = parents[rng() % parents.size()];
    m.add_bond(p, i, BondOrder::Single);
    --capacity[p];
    --capacity[i];
  }
  // bond-order upgrades
  for (auto& b : m.bonds) {
    if (capacity[b.a] >= 2 && capacity[b.b] >= 2 && rng() % 8 == 0) {
      b.order = BondOrder::Triple;
      capacity[b.a] -= 2;
      capacity[b.b] -= 2;
    } else if (capacity[b.a] >= 1 && capacity[b.b] >= 1 && rng() % 5 == 0) {
      b.order = BondOrder::Double;
      --capacity[b.a];
      --capacity[b.b];
    }
  }
  // ring closures
  int attempts = n_atoms / 3;
  for (int k = 0; k < attempts; ++k) {
    int a = static_cast<int>(rng() % n_atoms);
    int b = static_cast<int>(rng() % n_atoms);
    if (a == b || capacity[a] < 1 || capacity[b] < 1) continue;
    bool exists = false;
    for (const auto& bond : m.bonds)
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
        exists = true;
    if (exists) continue;
    m.add_bond(a, b, BondOrder::Single);
    --capacity[a];
    --capacity[b];
  }
  return m;
}

// perm[i] = new index of old atom i.
inline MolGraph relabel(const MolGraph& m, const std::vector<int>& perm) {
  MolGraph out;
  out.atoms.resize(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    out.atoms[perm[i]] = m.atoms[i];
  for (const auto& b : m.bonds)
    out.add_bond(perm[b.a], perm[b.b], b.order);
  return out;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

// Label- and bond-preserving isomorphism by plain backtracking.
inline bool brute_force_isomorphic(const MolGraph& a, const MolGraph& b) {
  if (a.atoms.size() != b.atoms.size() || a.bonds.size() != b.bonds.size())
    return false;
  const std::size_t n = a.atoms.size();
  std::vector<std::vector<int>> bond_a(n, std::vector<int>(n, 0));
  std::vector<std::vector<int>> bond_b(n, std::vector<int>(n, 0));
  for (const auto& bond : a.bonds)
    bond_a[bond.a][bond.b] = bond_a[bond.b][bond.a] =
        static_cast<int>(bond.order);
  for (const auto& bond : b.bonds)
    bond_b[bond.a][bond.b] = bond_b[bond.b][bond.a] =
        static_cast<int>(bond.order);
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);

  auto compatible = [&](std::size_t i, std::size_t j) {
    return a.atoms[i] == b.atoms[j];
  };
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || !compatible(i, j)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i; ++k)
        if (bond_a[i][k] != bond_b[j][map[k]]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      map[i] = static_cast<int>(j);
      used[j] = true;
      if (place(i + 1)) return true;
      used[j] = false;
      map[i] = -1;
    }
    return false;
  };
  return place(0);
}

// All injective constraint-preserving maps, straight from the definition
// (independent of the library matcher).
inline std::vector<std::vector<int>> brute_force_match(
    const chem::PatternGraph& p, const MolGraph& m) {
  std::vector<std::vector<int>> results;
  const std::size_t np = p.atoms.size(), nm = m.atoms.size();
  if (np == 0 || np > nm) return results;
  Adjacency adj(m);
  std::vector<std::vector<int>> order(nm, std::vector<int>(nm, 0));
  for (const auto& b : m.bonds)
    order[b.a][b.b] = order[b.b][b.a] = static_cast<int>(b.order);
  std::vector<int> map(np, -1);
  std::vector<bool> used(nm, false);
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == np) {
      results.push_back(map);
      return;
    }
    for (std::size_t j = 0; j < nm; ++j) {
      if (used[j]) continue;
      if (!chem::atom_matches(p.atoms[i], m, adj, j)) continue;
      bool ok = true;
      for (const auto& pb : p.bonds) {
        int x = -1, y = -1;
        if (pb.a == i && map[pb.b] >= 0) {
          x = static_cast<int>(j);
          y = map[pb.b];
        } else if (pb.b == i && map[pb.a] >= 0) {
          x = static_cast<int>(j);
          y = map[pb.a];
        } else {
          continue;
        }
        int o = order[x][y];
        if (o == 0 ||
            !chem::bond_matches(pb.order, static_cast<BondOrder>(o))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map[i] = static_cast<int>(j);
      used[j] = true;
      place(i + 1);
      used[j] = false;
      map[i] = -1;
    }
  };
  place(0);
  return results;
}

}  // namespace prexsyn::test
