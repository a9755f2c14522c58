#include "prexsyn/props/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "prexsyn/util/mix.hpp"

namespace prexsyn::props {

Fingerprint::Fingerprint(FpKind kind, int bits)
    : kind_(kind), bits_(bits), words_((bits + 63) / 64, 0) {}

int Fingerprint::popcount() const {
  int count = 0;
  for (auto w : words_) count += std::popcount(w);
  return count;
}

namespace {

constexpr std::uint64_t kKindSeed[2] = {0x5f3759df9e3779b9ULL,
                                        0x2545f4914f6cdd1dULL};

std::vector<std::uint64_t> initial_labels(const chem::MolGraph& m,
                                          const chem::Adjacency& adj,
                                          FpKind kind) {
  auto hyd = chem::implicit_hydrogens(m, adj);
  std::vector<std::uint64_t> labels(m.atoms.size());
  const std::uint64_t seed = kKindSeed[static_cast<int>(kind)];
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const chem::Atom& a = m.atoms[i];
    std::uint64_t h;
    if (kind == FpKind::Struct) {
      h = hash_combine(seed, static_cast<std::uint64_t>(a.element));
      h = hash_combine(h, a.aromatic ? 1 : 0);
      h = hash_combine(h, static_cast<std::uint64_t>(adj.degree(i)));
      h = hash_combine(h, static_cast<std::uint64_t>(hyd[i]));
      h = hash_combine(h, static_cast<std::uint64_t>(a.charge + 1));
    } else {
      bool n_or_o = a.element == chem::Element::N || a.element == chem::Element::O;
      unsigned mask = 0;
      if (n_or_o && hyd[i] >= 1) mask |= 1u;           // donor
      if (n_or_o) mask |= 2u;                          // acceptor
      if (a.aromatic) mask |= 4u;                      // aromatic
      if (a.element == chem::Element::C && !a.aromatic) mask |= 8u;  // hydrophobe
      if (mask == 0) mask = 16u;                       // other
      h = hash_combine(seed, mask);
    }
    labels[i] = h;
  }
  return labels;
}

}  // namespace

Fingerprint compute_fingerprint(const chem::MolGraph& m, FpKind kind,
                                int bits) {
  Fingerprint fp(kind, bits);
  if (m.atoms.empty()) return fp;
  chem::Adjacency adj(m);
  auto labels = initial_labels(m, adj, kind);
  constexpr int kRadius = 2;
  for (int round = 0; round <= kRadius; ++round) {
    for (auto label : labels)
      fp.set(static_cast<int>(label % static_cast<std::uint64_t>(bits)));
    if (round == kRadius) break;
    std::vector<std::uint64_t> next(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::vector<std::uint64_t> nbrs;
      for (const auto* e = adj.begin(i); e != adj.end(i); ++e) {
        std::uint64_t code =
            static_cast<std::uint64_t>(m.bonds[e->bond].order);
        nbrs.push_back(hash_combine(code, labels[e->neighbor]));
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::uint64_t h = hash_combine(labels[i], round + 1);
      for (auto v : nbrs) h = hash_combine(h, v);
      next[i] = h;
    }
    labels = std::move(next);
  }
  return fp;
}

Fingerprint fp_struct(const chem::MolGraph& m, int bits) {
  return compute_fingerprint(m, FpKind::Struct, bits);
}

Fingerprint fp_pharm(const chem::MolGraph& m, int bits) {
  return compute_fingerprint(m, FpKind::Pharm, bits);
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.kind() != b.kind())
    throw InvariantError("tanimoto: fingerprint kind mismatch");
  if (a.bits() != b.bits())
    throw InvariantError("tanimoto: fingerprint length mismatch");
  int inter = 0, uni = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    inter += std::popcount(a.words()[w] & b.words()[w]);
    uni += std::popcount(a.words()[w] | b.words()[w]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace prexsyn::props
