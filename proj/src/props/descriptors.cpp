#include "prexsyn/props/descriptors.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::props {

using chem::Element;

namespace {

constexpr std::string_view kNames[kDescriptorCount] = {
    "MW",   "HeavyAtoms", "Donors", "Acceptors",    "RotatableBonds",
    "TPSA", "CLogP",      "Rings",  "AromaticRings"};

}  // namespace

std::string_view descriptor_name(DescriptorField f) {
  return kNames[static_cast<int>(f)];
}

std::optional<DescriptorField> descriptor_from_name(std::string_view name) {
  for (int i = 0; i < kDescriptorCount; ++i)
    if (kNames[i] == name) return static_cast<DescriptorField>(i);
  return std::nullopt;
}

double DescriptorVector::get(DescriptorField f) const {
  switch (f) {
    case DescriptorField::MW: return mw;
    case DescriptorField::HAC: return hac;
    case DescriptorField::HBD: return hbd;
    case DescriptorField::HBA: return hba;
    case DescriptorField::ROTB: return rotb;
    case DescriptorField::TPSA: return tpsa;
    case DescriptorField::CLOGP: return clogp;
    case DescriptorField::RINGS: return rings;
    case DescriptorField::AROM_RINGS: return arom_rings;
  }
  return 0.0;
}

std::array<double, kDescriptorCount> DescriptorVector::as_array() const {
  std::array<double, kDescriptorCount> out;
  for (int i = 0; i < kDescriptorCount; ++i)
    out[i] = get(static_cast<DescriptorField>(i));
  return out;
}

const PropertyTables& PropertyTables::builtin() {
  static const PropertyTables tables;
  return tables;
}

PropertyTables load_property_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open property table file " + path);
  std::map<std::string, double*> slots;
  PropertyTables t;
  slots = {
      {"tpsa.N_arom", &t.tpsa_n_arom},   {"tpsa.N_h0", &t.tpsa_n_h0},
      {"tpsa.N_h1", &t.tpsa_n_h1},       {"tpsa.N_h2", &t.tpsa_n_h2},
      {"tpsa.O_arom", &t.tpsa_o_arom},   {"tpsa.O_carbonyl", &t.tpsa_o_carbonyl},
      {"tpsa.O_h0", &t.tpsa_o_h0},       {"tpsa.O_h1", &t.tpsa_o_h1},
      {"tpsa.S_arom", &t.tpsa_s_arom},   {"tpsa.S_h0", &t.tpsa_s_h0},
      {"tpsa.S_h1", &t.tpsa_s_h1},       {"tpsa.P", &t.tpsa_p},
      {"clogp.C_aliph", &t.clogp_c_aliph}, {"clogp.C_arom", &t.clogp_c_arom},
      {"clogp.H_on_C", &t.clogp_h_on_c}, {"clogp.N", &t.clogp_n},
      {"clogp.O", &t.clogp_o},           {"clogp.S", &t.clogp_s},
      {"clogp.P", &t.clogp_p},           {"clogp.B", &t.clogp_b},
      {"clogp.F", &t.clogp_f},           {"clogp.Cl", &t.clogp_cl},
      {"clogp.Br", &t.clogp_br},         {"clogp.I", &t.clogp_i},
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    double value;
    if (!(ss >> key >> value))
      throw IoError("property table line " + std::to_string(line_no) +
                    ": expected `key value`");
    auto it = slots.find(key);
    if (it == slots.end())
      throw IoError("property table line " + std::to_string(line_no) +
                    ": unknown key " + key);
    *it->second = value;
  }
  return t;
}

DescriptorVector descriptors(const chem::MolGraph& m,
                             const PropertyTables& tables) {
  DescriptorVector d;
  chem::Adjacency adj(m);
  auto hyd = chem::implicit_hydrogens(m, adj);
  auto ring_bonds = chem::ring_bond_mask(m);
  auto degrees = chem::heavy_degrees(m);

  d.hac = static_cast<int>(m.atoms.size());

  std::vector<bool> has_double_bond(m.atoms.size(), false);
  for (const auto& b : m.bonds)
    if (b.order == chem::BondOrder::Double)
      has_double_bond[b.a] = has_double_bond[b.b] = true;

  // Contributions are tallied as integer class counts and summed in a fixed
  // class order, so the double-precision results are exactly
  // permutation-invariant.
  std::array<int, chem::kElementCount> elem_count{};
  int h_total = 0, h_on_c = 0;
  std::array<int, 12> tpsa_count{};  // order matches `tpsa_values` below
  int c_arom = 0, c_aliph = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const chem::Atom& a = m.atoms[i];
    ++elem_count[static_cast<int>(a.element)];
    h_total += hyd[i];
    bool n_or_o = a.element == Element::N || a.element == Element::O;
    if (n_or_o) {
      ++d.hba;
      if (hyd[i] >= 1) ++d.hbd;
    }
    switch (a.element) {
      case Element::N:
        ++tpsa_count[a.aromatic ? 0 : hyd[i] == 0 ? 1 : hyd[i] == 1 ? 2 : 3];
        break;
      case Element::O:
        ++tpsa_count[a.aromatic           ? 4
                     : has_double_bond[i] ? 5
                     : hyd[i] == 0        ? 6
                                          : 7];
        break;
      case Element::S:
        ++tpsa_count[a.aromatic ? 8 : hyd[i] == 0 ? 9 : 10];
        break;
      case Element::P:
        ++tpsa_count[11];
        break;
      case Element::C:
        h_on_c += hyd[i];
        ++(a.aromatic ? c_arom : c_aliph);
        break;
      default:
        break;
    }
  }
  for (int e = 0; e < chem::kElementCount; ++e)
    d.mw += elem_count[e] * chem::atomic_weight(static_cast<Element>(e));
  d.mw += h_total * 1.008;

  const double tpsa_values[12] = {
      tables.tpsa_n_arom, tables.tpsa_n_h0, tables.tpsa_n_h1, tables.tpsa_n_h2,
      tables.tpsa_o_arom, tables.tpsa_o_carbonyl, tables.tpsa_o_h0,
      tables.tpsa_o_h1,   tables.tpsa_s_arom, tables.tpsa_s_h0,
      tables.tpsa_s_h1,   tables.tpsa_p};
  for (int k = 0; k < 12; ++k) d.tpsa += tpsa_count[k] * tpsa_values[k];

  d.clogp = c_aliph * tables.clogp_c_aliph + c_arom * tables.clogp_c_arom +
            h_on_c * tables.clogp_h_on_c +
            elem_count[static_cast<int>(Element::N)] * tables.clogp_n +
            elem_count[static_cast<int>(Element::O)] * tables.clogp_o +
            elem_count[static_cast<int>(Element::S)] * tables.clogp_s +
            elem_count[static_cast<int>(Element::P)] * tables.clogp_p +
            elem_count[static_cast<int>(Element::B)] * tables.clogp_b +
            elem_count[static_cast<int>(Element::F)] * tables.clogp_f +
            elem_count[static_cast<int>(Element::Cl)] * tables.clogp_cl +
            elem_count[static_cast<int>(Element::Br)] * tables.clogp_br +
            elem_count[static_cast<int>(Element::I)] * tables.clogp_i;

  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    const auto& b = m.bonds[bi];
    if (b.order == chem::BondOrder::Single && !ring_bonds[bi] &&
        degrees[b.a] >= 2 && degrees[b.b] >= 2)
      ++d.rotb;
  }

  // cyclomatic ring counts (molecule is connected by invariant)
  d.rings = static_cast<int>(m.bonds.size()) -
            static_cast<int>(m.atoms.size()) + 1;
  int arom_bonds = 0;
  std::vector<bool> arom_atom_incident(m.atoms.size(), false);
  for (const auto& b : m.bonds)
    if (b.order == chem::BondOrder::Aromatic) {
      ++arom_bonds;
      arom_atom_incident[b.a] = arom_atom_incident[b.b] = true;
    }
  if (arom_bonds > 0) {
    int arom_atoms = 0;
    for (bool f : arom_atom_incident) arom_atoms += f ? 1 : 0;
    // components of the aromatic-bond subgraph
    std::vector<int> comp(m.atoms.size(), -1);
    int n_comp = 0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      if (!arom_atom_incident[i] || comp[i] >= 0) continue;
      std::vector<std::size_t> stack{i};
      comp[i] = n_comp;
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (const auto* e = adj.begin(u); e != adj.end(u); ++e) {
          if (m.bonds[e->bond].order != chem::BondOrder::Aromatic) continue;
          if (comp[e->neighbor] < 0) {
            comp[e->neighbor] = n_comp;
            stack.push_back(e->neighbor);
          }
        }
      }
      ++n_comp;
    }
    d.arom_rings = arom_bonds - arom_atoms + n_comp;
  }
  return d;
}

double lipinski_score(const DescriptorVector& d) {
  int satisfied = 0;
  satisfied += d.mw < 500.0;
  satisfied += d.hbd < 5;
  satisfied += d.hba < 10;
  satisfied += d.rotb < 10;
  satisfied += d.tpsa < 140.0;
  satisfied += d.clogp < 5.0;
  return satisfied / 6.0;
}

const std::array<DescriptorRange, kDescriptorCount>& descriptor_ranges() {
  // Empirical ranges of random products of the default toy universe.
  static const std::array<DescriptorRange, kDescriptorCount> ranges = {{
      {60.0, 900.0},   // MW
      {4.0, 64.0},     // HeavyAtoms
      {0.0, 10.0},     // Donors
      {0.0, 16.0},     // Acceptors
      {0.0, 24.0},     // RotatableBonds
      {0.0, 320.0},    // TPSA
      {-6.0, 14.0},    // CLogP
      {0.0, 7.0},      // Rings
      {0.0, 6.0},      // AromaticRings
  }};
  return ranges;
}

double normalize_descriptor(DescriptorField f, double value) {
  const auto& r = descriptor_ranges()[static_cast<int>(f)];
  double center = 0.5 * (r.lo + r.hi);
  double halfwidth = 0.5 * (r.hi - r.lo);
  return (value - center) / halfwidth;
}

}  // namespace prexsyn::props
