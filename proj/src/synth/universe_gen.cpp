#include "prexsyn/synth/universe_gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "prexsyn/chem/smiles.hpp"
#include "prexsyn/props/descriptors.hpp"
#include "prexsyn/util/rng.hpp"

namespace prexsyn::synth {

using chem::Atom;
using chem::BondOrder;
using chem::Element;
using chem::MolGraph;

namespace {

struct TemplateSpec {
  int arity;
  const char* slot1;
  const char* slot2;  // nullptr for arity 1
  const char* bond;
};

// id order matters: files and token ids are derived from it.
constexpr TemplateSpec kTemplates[] = {
    /*0 amide coupling      */ {2, "[C;D2-3:1](=[O;D1])[O;D1:90]", "[N;D1-2:1]", "single"},
    /*1 ester coupling      */ {2, "[C;D2-3:1](=[O;D1])[O;D1:90]", "[O;D1:1]", "single"},
    /*2 amine alkylation    */ {2, "[C;D1-3:1][Cl;D1:90]", "[N;D1-2:1]", "single"},
    /*3 biaryl coupling     */ {2, "[c;D2-3:1][Br;D1:90]", "[c;D2-3:1][B;D-3:90]", "single"},
    /*4 reductive amination */ {2, "[C;D1-3:1](=[O;D1:90])", "[N;D1-2:1]", "single"},
    /*5 etherification      */ {2, "[C;D1-3:1][Cl;D1:90]", "[O;D1:1]", "single"},
    /*6 thioetherification  */ {2, "[C;D1-3:1][Cl;D1:90]", "[S;D1:1]", "single"},
    /*7 alkyne arylation    */ {2, "[c;D2-3:1][Br;D1:90]", "[C;D1:1]#C", "single"},
    /*8 amine arylation     */ {2, "[c;D2-3:1][Br;D1:90]", "[N;D1-2:1]", "single"},
    /*9 lactamization       */ {1, "[C:1](=[O;D1])([O;D1:90])CCC[N;D1:2]", nullptr, "single"},
};

struct MolBuilder {
  MolGraph m;
  std::vector<int> slots;

  int add(Element e, bool aromatic = false) {
    m.add_atom({e, aromatic, 0});
    slots.push_back(chem::default_valence(e));
    return static_cast<int>(m.atoms.size()) - 1;
  }

  void bond(int a, int b, BondOrder order) {
    int cost = order == BondOrder::Double   ? 2
               : order == BondOrder::Triple ? 3
                                            : 1;
    m.add_bond(a, b, order);
    slots[a] -= cost;
    slots[b] -= cost;
  }

  int grow(int at, Element e, bool aromatic = false) {
    int idx = add(e, aromatic);
    bond(at, idx, BondOrder::Single);
    return idx;
  }

  std::vector<int> aromatic_ring6(int hetero_n) {
    std::vector<int> ring;
    for (int i = 0; i < 6; ++i)
      ring.push_back(add(i < hetero_n ? Element::N : Element::C, true));
    for (int i = 0; i < 6; ++i)
      m.add_bond(ring[i], ring[(i + 1) % 6], BondOrder::Aromatic);
    for (int i = 0; i < 6; ++i)
      slots[ring[i]] = (m.atoms[ring[i]].element == Element::C) ? 1 : 0;
    return ring;
  }

  std::vector<int> aromatic_ring5(Element hetero) {
    std::vector<int> ring;
    ring.push_back(add(hetero, true));
    for (int i = 0; i < 4; ++i) ring.push_back(add(Element::C, true));
    for (int i = 0; i < 5; ++i)
      m.add_bond(ring[i], ring[(i + 1) % 5], BondOrder::Aromatic);
    slots[ring[0]] = 0;
    for (int i = 1; i < 5; ++i) slots[ring[i]] = 1;
    return ring;
  }

  std::vector<int> chain(int from, int len) {
    std::vector<int> atoms;
    int prev = from;
    for (int i = 0; i < len; ++i) {
      prev = prev < 0 ? add(Element::C) : grow(prev, Element::C);
      atoms.push_back(prev);
    }
    return atoms;
  }

  int pick_open(Rng& rng, int need, int want_aromatic /* -1 any */) {
    std::vector<int> cands;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      if (slots[i] < need) continue;
      if (m.atoms[i].element != Element::C) continue;
      if (want_aromatic == 1 && !m.atoms[i].aromatic) continue;
      if (want_aromatic == 0 && m.atoms[i].aromatic) continue;
      cands.push_back(static_cast<int>(i));
    }
    if (cands.empty()) return -1;
    return cands[uniform_index(rng, cands.size())];
  }

  int size() const { return static_cast<int>(m.atoms.size()); }
};

enum class Family {
  Acid,
  Amine,
  Alcohol,
  Aldehyde,
  ArylBromide,
  AlkylChloride,
  ArylBoronate,
  Alkyne,
  Thiol,
  AminoAcid,
};

constexpr Family kFamilies[] = {
    Family::Acid,         Family::Amine,   Family::Alcohol,
    Family::Aldehyde,     Family::ArylBromide, Family::AlkylChloride,
    Family::ArylBoronate, Family::Alkyne,  Family::Thiol,
    Family::AminoAcid,
};

// (template id, slot) each family must keep matching after decoration.
constexpr std::pair<int, int> kFamilySlot[] = {
    {0, 0}, {0, 1}, {1, 1}, {4, 0}, {3, 0}, {2, 0}, {3, 1}, {7, 1}, {6, 1}, {9, 0},
};

bool attach_group(MolBuilder& b, Rng& rng, Family f) {
  switch (f) {
    case Family::Acid: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      int c = b.grow(at, Element::C);
      int o1 = b.add(Element::O);
      b.bond(c, o1, BondOrder::Double);
      b.grow(c, Element::O);
      return true;
    }
    case Family::Amine: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      b.grow(at, Element::N);
      return true;
    }
    case Family::Alcohol: {
      int at = b.pick_open(rng, 1, 0);
      if (at < 0) return false;
      b.grow(at, Element::O);
      return true;
    }
    case Family::Aldehyde: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      int c = b.grow(at, Element::C);
      int o = b.add(Element::O);
      b.bond(c, o, BondOrder::Double);
      return true;
    }
    case Family::ArylBromide: {
      int at = b.pick_open(rng, 1, 1);
      if (at < 0) return false;
      b.grow(at, Element::Br);
      return true;
    }
    case Family::AlkylChloride: {
      int at = b.pick_open(rng, 1, 0);
      if (at < 0) return false;
      int c = b.grow(at, Element::C);
      b.grow(c, Element::Cl);
      return true;
    }
    case Family::ArylBoronate: {
      int at = b.pick_open(rng, 1, 1);
      if (at < 0) return false;
      int bo = b.grow(at, Element::B);
      b.grow(bo, Element::O);
      b.grow(bo, Element::O);
      return true;
    }
    case Family::Alkyne: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      int c1 = b.grow(at, Element::C);
      int c2 = b.add(Element::C);
      b.bond(c1, c2, BondOrder::Triple);
      return true;
    }
    case Family::Thiol: {
      int at = b.pick_open(rng, 1, 0);
      if (at < 0) return false;
      b.grow(at, Element::S);
      return true;
    }
    case Family::AminoAcid: {
      int at = b.pick_open(rng, 1, 0);
      if (at < 0) return false;
      int n = b.add(Element::N);
      int c1 = b.add(Element::C);
      b.bond(n, c1, BondOrder::Single);
      int c2 = b.grow(c1, Element::C);
      int c3 = b.grow(c2, Element::C);
      b.bond(c3, at, BondOrder::Single);
      int ac = b.grow(c3, Element::C);
      int o1 = b.add(Element::O);
      b.bond(ac, o1, BondOrder::Double);
      b.grow(ac, Element::O);
      return true;
    }
  }
  return false;
}

enum class Profile { Greasy, Polar, Donors, Floppy, Mild };

// Decoration units. Each returns false when no attachment point is left.
bool unit_greasy(MolBuilder& b, Rng& rng) {
  switch (uniform_index(rng, 4)) {
    case 0: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      b.chain(at, 2 + static_cast<int>(uniform_index(rng, 3)));
      return true;
    }
    case 1: {
      int at = b.pick_open(rng, 1, -1);
      if (at < 0) return false;
      auto ring = b.aromatic_ring6(0);
      b.bond(at, ring[0], BondOrder::Single);
      return true;
    }
    case 2: {
      int at = b.pick_open(rng, 1, 1);
      if (at < 0) return unit_greasy(b, rng);  // fall through to chains
      b.grow(at, uniform_real(rng) < 0.5 ? Element::Cl : Element::F);
      return true;
    }
    default: {
      int at = b.pick_open(rng, 2, 0);
      if (at < 0) {
        at = b.pick_open(rng, 1, -1);
        if (at < 0) return false;
        b.chain(at, 2);
        return true;
      }
      b.grow(at, Element::C);
      b.grow(at, Element::C);
      return true;
    }
  }
}

bool unit_polar(MolBuilder& b, Rng& rng) {
  int at = b.pick_open(rng, 1, -1);
  if (at < 0) return false;
  switch (uniform_index(rng, 4)) {
    case 0:  // primary amide arm (big TPSA)
    {
      int c = b.grow(at, Element::C);
      int o = b.add(Element::O);
      b.bond(c, o, BondOrder::Double);
      b.grow(c, Element::N);
      return true;
    }
    case 1:  // hydroxyl
      b.grow(at, Element::O);
      return true;
    case 2:  // amine
      b.grow(at, Element::N);
      return true;
    default:  // methoxy
    {
      int o = b.grow(at, Element::O);
      b.grow(o, Element::C);
      return true;
    }
  }
}

bool unit_donor(MolBuilder& b, Rng& rng) {
  int at = b.pick_open(rng, 1, -1);
  if (at < 0) return false;
  switch (uniform_index(rng, 3)) {
    case 0:
      b.grow(at, Element::O);
      return true;
    case 1:
      b.grow(at, Element::N);
      return true;
    default: {  // hydroxymethyl, keeps slots coming
      int c = b.grow(at, Element::C);
      b.grow(c, Element::O);
      return true;
    }
  }
}

bool unit_floppy(MolBuilder& b, Rng& rng) {
  int at = b.pick_open(rng, 1, -1);
  if (at < 0) return false;
  if (uniform_real(rng) < 0.25) {
    // flexible ether chain keeps CLogP in check
    int o = b.grow(at, Element::O);
    b.chain(o, 2 + static_cast<int>(uniform_index(rng, 3)));
    return true;
  }
  b.chain(at, 3 + static_cast<int>(uniform_index(rng, 3)));
  return true;
}

bool profile_violated(const props::DescriptorVector& d, Profile p) {
  switch (p) {
    case Profile::Greasy: return d.clogp >= 5.3;
    case Profile::Polar: return d.tpsa >= 146.0;
    case Profile::Donors: return d.hbd >= 5;
    case Profile::Floppy: return d.rotb >= 10;
    case Profile::Mild: return false;
  }
  return false;
}

constexpr int kMaxBlockAtoms = 30;

MolGraph build_block(Rng& rng, Family family, Profile profile) {
  MolBuilder b;
  bool needs_aryl =
      family == Family::ArylBromide || family == Family::ArylBoronate;
  double u = uniform_real(rng);
  bool aromatic_scaffold = needs_aryl || u < 0.45;
  if (aromatic_scaffold) {
    int hetero = uniform_real(rng) < 0.3 ? 1 : 0;
    if (!needs_aryl && uniform_real(rng) < 0.2)
      b.aromatic_ring5(uniform_real(rng) < 0.5 ? Element::S : Element::O);
    else
      b.aromatic_ring6(hetero);
    if (uniform_real(rng) < 0.6) {
      int at = b.pick_open(rng, 1, 1);
      if (at >= 0) b.chain(at, 1 + static_cast<int>(uniform_index(rng, 3)));
    }
  } else {
    b.chain(-1, 3 + static_cast<int>(uniform_index(rng, 5)));
  }

  if (!attach_group(b, rng, family)) return {};
  if (uniform_real(rng) < 0.45) {
    Family second = kFamilies[uniform_index(rng, std::size(kFamilies))];
    if (second != Family::AminoAcid) attach_group(b, rng, second);
  }

  if (profile == Profile::Mild) {
    // at most two light units; acceptance filtering happens in the caller
    int extra = static_cast<int>(uniform_index(rng, 3));
    for (int i = 0; i < extra; ++i)
      (uniform_real(rng) < 0.5 ? unit_polar : unit_greasy)(b, rng);
    return b.m;
  }

  // decorate until the profile's condition is violated
  for (int step = 0; step < 24 && b.size() < kMaxBlockAtoms; ++step) {
    auto d = props::descriptors(b.m);
    if (profile_violated(d, profile)) return b.m;
    bool ok = false;
    switch (profile) {
      case Profile::Greasy: ok = unit_greasy(b, rng); break;
      case Profile::Polar: ok = unit_polar(b, rng); break;
      case Profile::Donors: ok = unit_donor(b, rng); break;
      case Profile::Floppy: ok = unit_floppy(b, rng); break;
      case Profile::Mild: break;
    }
    if (!ok) break;
  }
  return profile_violated(props::descriptors(b.m), profile) ? b.m : MolGraph{};
}

Profile draw_profile(Rng& rng) {
  double u = uniform_real(rng);
  if (u < 0.30) return Profile::Greasy;
  if (u < 0.60) return Profile::Polar;
  if (u < 0.76) return Profile::Donors;
  if (u < 0.95) return Profile::Floppy;
  return Profile::Mild;
}

}  // namespace

Registry default_registry() {
  std::vector<chem::ReactionTemplate> templates;
  int id = 0;
  for (const auto& spec : kTemplates) {
    chem::ReactionTemplate t;
    t.id = id++;
    t.arity = spec.arity;
    t.slot_sources.push_back(spec.slot1);
    t.slot_patterns.push_back(chem::parse_pattern(spec.slot1));
    if (spec.arity == 2) {
      t.slot_sources.push_back(spec.slot2);
      t.slot_patterns.push_back(chem::parse_pattern(spec.slot2));
    }
    t.bond_order = std::string_view(spec.bond) == "double"
                       ? BondOrder::Double
                       : BondOrder::Single;
    templates.push_back(std::move(t));
  }
  return Registry(std::move(templates));
}

Universe generate_universe(const UniverseGenConfig& cfg) {
  Rng rng = make_rng(cfg.seed, /*stream=*/0xB10C);
  Registry registry = default_registry();
  std::vector<BuildingBlock> blocks;
  std::set<std::string> seen;
  int family_cursor = 0;
  int guard = 0;
  while (static_cast<int>(blocks.size()) < cfg.n_blocks) {
    if (++guard > cfg.n_blocks * 500)
      throw InvariantError("universe generation failed to converge");
    Family family = kFamilies[family_cursor % std::size(kFamilies)];
    Profile profile = draw_profile(rng);
    MolGraph m = build_block(rng, family, profile);
    if (m.atoms.empty() || m.atoms.size() > kMaxBlockAtoms) continue;
    try {
      chem::validate_molecule(m);
    } catch (const std::exception&) {
      continue;
    }
    if (profile == Profile::Mild &&
        props::lipinski_score(props::descriptors(m)) < 1.0)
      continue;
    // the family's reactive group must survive decoration
    auto [tid, slot] = kFamilySlot[static_cast<int>(family)];
    if (!chem::has_match(registry.rxn(tid).slot_patterns[slot], m)) continue;
    std::string canon = chem::write_canonical(m);
    if (!seen.insert(canon).second) continue;
    BuildingBlock bb;
    bb.id = static_cast<int>(blocks.size());
    bb.graph = std::move(m);
    bb.canonical = std::move(canon);
    blocks.push_back(std::move(bb));
    ++family_cursor;
  }
  return {Library(std::move(blocks)), std::move(registry)};
}

}  // namespace prexsyn::synth
