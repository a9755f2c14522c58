#include <cmath>

#include "doctest.h"
#include "prexsyn/chem/canonical.hpp"
#include "prexsyn/chem/smiles.hpp"
#include "prexsyn/props/descriptors.hpp"
#include "prexsyn/props/fingerprint.hpp"
#include "prexsyn/props/fragments.hpp"
#include "prexsyn/props/mpo.hpp"
#include "prexsyn/props/prompt.hpp"
#include "test_helpers.hpp"

using namespace prexsyn;
using namespace prexsyn::props;
using prexsyn::test::random_molecule;
using prexsyn::test::random_permutation;
using prexsyn::test::relabel;

TEST_CASE("fp_struct identity and discrimination") {
  auto methane = chem::parse_smiles("C");
  auto benzene = chem::parse_smiles("c1ccccc1");
  CHECK(tanimoto(fp_struct(methane), fp_struct(methane)) == 1.0);
  CHECK(tanimoto(fp_struct(benzene), fp_struct(benzene)) == 1.0);
  CHECK(tanimoto(fp_struct(methane), fp_struct(benzene)) < 1.0);
  CHECK(fp_struct(methane).popcount() == 3);  // one atom, one env per round
}

TEST_CASE("fingerprints are permutation-invariant") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 25; ++t) {
    auto m = random_molecule(rng, 6 + static_cast<int>(rng() % 8));
    chem::validate_molecule(m);
    auto perm = random_permutation(rng, m.atoms.size());
    auto r = relabel(m, perm);
    CHECK(fp_struct(m) == fp_struct(r));
    CHECK(fp_pharm(m) == fp_pharm(r));
  }
}

TEST_CASE("fp_pharm feature classes") {
  auto ethanol = chem::parse_smiles("CCO");
  auto methanol = chem::parse_smiles("CO");
  // radius-0 donor/acceptor bits shared between the two alcohols
  auto fe = fp_pharm(ethanol);
  auto fm = fp_pharm(methanol);
  int shared = 0;
  for (int i = 0; i < fe.bits(); ++i)
    if (fe.test(i) && fm.test(i)) ++shared;
  CHECK(shared >= 2);  // hydrophobe bit and donor/acceptor O bit at radius 0

  auto alkane = chem::parse_smiles("CCCC");
  auto fa = fp_pharm(alkane);
  auto hydrophobe_only = fp_pharm(chem::parse_smiles("C"));
  // all radius-0 labels of a plain alkane collapse to the hydrophobe class
  bool has_hydro_bit = false;
  for (int i = 0; i < fa.bits(); ++i)
    if (hydrophobe_only.test(i) && fa.test(i)) has_hydro_bit = true;
  CHECK(has_hydro_bit);
}

TEST_CASE("tanimoto arithmetic and errors") {
  Fingerprint a(FpKind::Struct, 8), b(FpKind::Struct, 8);
  a.set(0);
  a.set(1);
  b.set(0);
  b.set(2);
  CHECK(tanimoto(a, b) == doctest::Approx(1.0 / 3.0));
  Fingerprint za(FpKind::Struct, 8), zb(FpKind::Struct, 8);
  CHECK(tanimoto(za, zb) == 1.0);
  Fingerprint p(FpKind::Pharm, 8);
  CHECK_THROWS_AS(tanimoto(a, p), InvariantError);
  CHECK(tanimoto(a, a) == 1.0);
  // disjoint nonzero
  Fingerprint c(FpKind::Struct, 8);
  c.set(5);
  CHECK(tanimoto(a, c) == 0.0);
}

TEST_CASE("fragments rules") {
  auto benzene = chem::parse_smiles("c1ccccc1");
  CHECK(fragment_strings(benzene).size() == 1);

  auto toluene = chem::parse_smiles("Cc1ccccc1");
  CHECK(fragment_strings(toluene).size() == 1);  // methyl has degree 1, no cut

  auto ethylbenzene = chem::parse_smiles("CCc1ccccc1");
  auto pieces = fragment_strings(ethylbenzene);
  CHECK(pieces.size() == 2);

  // stability: recomputing on the canonical reparse yields the same ids
  auto m = chem::parse_smiles("CCc1ccc(CC(=O)O)cc1");
  auto f1 = fragments(m);
  auto reparsed = chem::parse_smiles(chem::write_canonical(m));
  CHECK(fragments(reparsed) == f1);
  CHECK(f1.ids.size() >= 2);
}

TEST_CASE("descriptors on reference molecules") {
  auto methane = chem::parse_smiles("C");
  auto d = descriptors(methane);
  CHECK(d.mw == doctest::Approx(16.043).epsilon(1e-3));
  CHECK(d.hac == 1);
  CHECK(d.hbd == 0);
  CHECK(d.hba == 0);
  CHECK(d.rotb == 0);

  auto benzene = descriptors(chem::parse_smiles("c1ccccc1"));
  CHECK(benzene.hac == 6);
  CHECK(benzene.arom_rings == 1);
  CHECK(benzene.rings == 1);
  CHECK(benzene.rotb == 0);

  auto ethanol = descriptors(chem::parse_smiles("CCO"));
  CHECK(ethanol.hbd == 1);
  CHECK(ethanol.hba == 1);
  CHECK(ethanol.rotb == 0);

  auto butane = descriptors(chem::parse_smiles("CCCC"));
  CHECK(butane.rotb == 1);

  auto naphthalene = descriptors(chem::parse_smiles("c1ccc2ccccc2c1"));
  CHECK(naphthalene.arom_rings == 2);
  CHECK(naphthalene.rings == 2);
}

TEST_CASE("descriptor permutation invariance and additivity") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    auto m = random_molecule(rng, 5 + static_cast<int>(rng() % 9));
    chem::validate_molecule(m);
    auto perm = random_permutation(rng, m.atoms.size());
    CHECK(descriptors(m) == descriptors(relabel(m, perm)));
  }
  // mw additivity over disjoint parts (pre-connection harness)
  auto a = chem::parse_smiles("CCO");
  auto b = chem::parse_smiles("CC(=O)O");
  chem::MolGraph both = a;
  int off = static_cast<int>(both.atoms.size());
  for (const auto& at : b.atoms) both.atoms.push_back(at);
  for (const auto& bd : b.bonds) both.add_bond(off + bd.a, off + bd.b, bd.order);
  double mw_parts = descriptors(a).mw + descriptors(b).mw;
  // descriptors() needs connectivity only via validate; compute directly
  auto d_both = descriptors(both);
  CHECK(d_both.mw == doctest::Approx(mw_parts).epsilon(1e-9));
}

TEST_CASE("lipinski score counts satisfied conditions") {
  DescriptorVector d;
  d.mw = 300;
  d.hbd = 1;
  d.hba = 3;
  d.rotb = 4;
  d.tpsa = 80;
  d.clogp = 2.5;
  CHECK(lipinski_score(d) == 1.0);
  d.mw = 700;
  d.hbd = 7;
  d.hba = 12;
  CHECK(lipinski_score(d) == doctest::Approx(0.5));
  d.rotb = 15;
  d.tpsa = 200;
  d.clogp = 8;
  CHECK(lipinski_score(d) == 0.0);
}

TEST_CASE("property tables file matches builtin") {
  auto loaded = load_property_tables(std::string(PREXSYN_SOURCE_DIR) +
                                     "/data/property_tables.txt");
  const auto& b = PropertyTables::builtin();
  CHECK(loaded.tpsa_n_arom == b.tpsa_n_arom);
  CHECK(loaded.tpsa_o_h1 == b.tpsa_o_h1);
  CHECK(loaded.clogp_c_arom == b.clogp_c_arom);
  CHECK(loaded.clogp_i == b.clogp_i);
}

TEST_CASE("mpo score modifiers and geometric mean") {
  auto target = chem::parse_smiles("CC(=O)NC");
  MpoSpec rediscovery;
  rediscovery.name = "rediscovery";
  MpoComponent sim;
  sim.kind = MpoComponent::Kind::SimStruct;
  sim.target = fp_struct(target);
  sim.modifier = Modifier::Threshold;
  sim.mu = 1.0;
  rediscovery.components.push_back(sim);
  CHECK(mpo_score(target, rediscovery) == 1.0);

  MpoSpec spec;
  MpoComponent c1;
  c1.kind = MpoComponent::Kind::Descriptor;
  c1.field = DescriptorField::CLOGP;
  c1.modifier = Modifier::Gaussian;
  c1.mu = descriptors(target).clogp;
  c1.sigma = 1.0;
  spec.components = {c1, sim};
  CHECK(mpo_score(target, spec) == doctest::Approx(1.0));

  // any zero component forces zero
  MpoComponent zero;
  zero.kind = MpoComponent::Kind::Descriptor;
  zero.field = DescriptorField::MW;
  zero.modifier = Modifier::Threshold;
  zero.mu = -1.0;  // degenerate threshold: positive -> 1, but mu<=0 handled
  spec.components.push_back(zero);
  CHECK(mpo_score(target, spec) > 0.0);  // mw > 0 -> 1.0
  spec.components.back().kind = MpoComponent::Kind::SimStruct;
  spec.components.back().target = Fingerprint(FpKind::Struct, kFingerprintBits);
  spec.components.back().modifier = Modifier::Threshold;
  spec.components.back().mu = 2.0;  // tanimoto vs empty fp is 0 -> score 0
  CHECK(mpo_score(target, spec) == 0.0);
}

TEST_CASE("mpo spec parsing") {
  auto spec = parse_mpo_spec(
      "name demo\n"
      "descriptor CLogP gaussian 2.0 1.5\n"
      "sim_struct CCO min_clip 0.8 0.2\n");
  CHECK(spec.name == "demo");
  REQUIRE(spec.components.size() == 2);
  CHECK(spec.components[0].field == DescriptorField::CLOGP);
  CHECK(spec.components[0].sigma == 1.5);
  CHECK(spec.components[1].kind == MpoComponent::Kind::SimStruct);
  CHECK_THROWS_AS(parse_mpo_spec("descriptor Bogus gaussian 1 1\n"), IoError);
  CHECK_THROWS_AS(parse_mpo_spec("# nothing\n"), IoError);
}

TEST_CASE("substruct prompt draws nonempty subsets") {
  Rng rng = make_rng(3, 3);
  auto m = chem::parse_smiles("CCc1ccc(CC(=O)O)cc1");
  auto all = fragments(m);
  for (int i = 0; i < 20; ++i) {
    auto p = compute_prompt(m, PropertyType::Substruct, rng);
    CHECK(!p.frags.ids.empty());
    CHECK(all.contains_all(p.frags));
  }
}
