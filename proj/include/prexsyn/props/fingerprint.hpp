#pragma once

#include <cstdint>
#include <vector>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::props {

enum class FpKind : std::uint8_t { Struct = 0, Pharm = 1 };

inline constexpr int kFingerprintBits = 2048;

class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(FpKind kind, int bits);

  FpKind kind() const { return kind_; }
  int bits() const { return bits_; }
  bool test(int i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }
  void set(int i) { words_[i >> 6] |= 1ULL << (i & 63); }
  void flip(int i) { words_[i >> 6] ^= 1ULL << (i & 63); }
  int popcount() const;
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  FpKind kind_ = FpKind::Struct;
  int bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Morgan-style circular fingerprint, radius 2. Initial atom label packs
// (element, aromatic, heavy degree, implicit H, charge); two refinement
// rounds fold in sorted (bond order, neighbor label) lists. Every
// (atom, round) identifier sets one bit.
Fingerprint fp_struct(const chem::MolGraph& m, int bits = kFingerprintBits);

// Same hashing with pharmacophore feature-class labels: donor (N/O with
// implicit H), acceptor (N/O), aromatic, hydrophobe (non-aromatic C), other.
Fingerprint fp_pharm(const chem::MolGraph& m, int bits = kFingerprintBits);

Fingerprint compute_fingerprint(const chem::MolGraph& m, FpKind kind,
                                int bits = kFingerprintBits);

// |a AND b| / |a OR b|; 1.0 when both are all-zero. Throws InvariantError on
// kind or length mismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace prexsyn::props
