#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::props {

inline constexpr int kDescriptorCount = 9;

enum class DescriptorField : int {
  MW = 0,
  HAC = 1,
  HBD = 2,
  HBA = 3,
  ROTB = 4,
  TPSA = 5,
  CLOGP = 6,
  RINGS = 7,
  AROM_RINGS = 8,
};

// Query-DSL names (Table-3 style).
std::string_view descriptor_name(DescriptorField f);
std::optional<DescriptorField> descriptor_from_name(std::string_view name);

struct DescriptorVector {
  double mw = 0.0;
  int hac = 0;
  int hbd = 0;
  int hba = 0;
  int rotb = 0;
  double tpsa = 0.0;
  double clogp = 0.0;
  int rings = 0;
  int arom_rings = 0;

  double get(DescriptorField f) const;
  std::array<double, kDescriptorCount> as_array() const;

  friend bool operator==(const DescriptorVector&, const DescriptorVector&) = default;
};

// Additive atom-contribution tables for the TPSA and CLogP approximations.
// These are project-fixed constants (shipped in data/property_tables.txt as
// well); no agreement with any external toolkit is claimed.
struct PropertyTables {
  // tpsa contributions
  double tpsa_n_arom = 12.9;
  double tpsa_n_h0 = 3.2;
  double tpsa_n_h1 = 12.0;
  double tpsa_n_h2 = 26.0;
  double tpsa_o_arom = 13.1;
  double tpsa_o_carbonyl = 17.1;
  double tpsa_o_h0 = 9.2;
  double tpsa_o_h1 = 20.2;
  double tpsa_s_arom = 28.2;
  double tpsa_s_h0 = 25.3;
  double tpsa_s_h1 = 38.8;
  double tpsa_p = 13.6;
  // clogp contributions
  double clogp_c_aliph = 0.15;
  double clogp_c_arom = 0.30;
  double clogp_h_on_c = 0.10;
  double clogp_n = -0.90;
  double clogp_o = -0.70;
  double clogp_s = 0.25;
  double clogp_p = -0.50;
  double clogp_b = -0.20;
  double clogp_f = 0.30;
  double clogp_cl = 0.65;
  double clogp_br = 0.85;
  double clogp_i = 1.00;

  static const PropertyTables& builtin();
};

PropertyTables load_property_tables(const std::string& path);

DescriptorVector descriptors(const chem::MolGraph& m,
                             const PropertyTables& tables = PropertyTables::builtin());

// Fraction of the six rule-of-five style conditions satisfied:
// MW<500, Donors<5, Acceptors<10, RotatableBonds<10, TPSA<140, CLogP<5.0.
double lipinski_score(const DescriptorVector& d);

// Empirical descriptor ranges of the default toy universe; used for prompt
// normalization (affine map into roughly [-1, 1]) and for realizing
// descriptor inequalities as concrete values.
struct DescriptorRange {
  double lo, hi;
};
const std::array<DescriptorRange, kDescriptorCount>& descriptor_ranges();
double normalize_descriptor(DescriptorField f, double value);

}  // namespace prexsyn::props
