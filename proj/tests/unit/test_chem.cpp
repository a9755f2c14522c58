#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "prexsyn/chem/canonical.hpp"
#include "prexsyn/chem/mol.hpp"
#include "prexsyn/chem/pattern.hpp"
#include "prexsyn/chem/rxn.hpp"
#include "prexsyn/chem/smiles.hpp"
#include "test_helpers.hpp"

using namespace prexsyn;
using namespace prexsyn::chem;
using prexsyn::test::brute_force_isomorphic;
using prexsyn::test::brute_force_match;
using prexsyn::test::random_molecule;
using prexsyn::test::random_permutation;
using prexsyn::test::relabel;

TEST_CASE("parse_smiles basics") {
  MolGraph methane = parse_smiles("C");
  CHECK(methane.atoms.size() == 1);
  CHECK(implicit_hydrogens(methane)[0] == 4);

  MolGraph benzene = parse_smiles("c1ccccc1");
  CHECK(benzene.atoms.size() == 6);
  CHECK(benzene.bonds.size() == 6);
  auto hyd = implicit_hydrogens(benzene);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(benzene.atoms[i].aromatic);
    CHECK(benzene.atoms[i].element == Element::C);
    CHECK(hyd[i] == 1);
  }
  for (const auto& b : benzene.bonds) CHECK(b.order == BondOrder::Aromatic);

  MolGraph acetic = parse_smiles("CC(=O)O");
  CHECK(acetic.atoms.size() == 4);
  int doubles = 0;
  for (const auto& b : acetic.bonds)
    if (b.order == BondOrder::Double) ++doubles;
  CHECK(doubles == 1);
  auto h = implicit_hydrogens(acetic);
  CHECK(h[3] == 1);  // hydroxyl oxygen
  CHECK(h[2] == 0);  // carbonyl oxygen
}

TEST_CASE("parse_smiles error reporting") {
  CHECK_THROWS_AS(parse_smiles("C(C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C1CC"), ParseError);     // unclosed ring
  CHECK_THROWS_AS(parse_smiles("C="), ParseError);       // dangling bond
  CHECK_THROWS_AS(parse_smiles("[Xe]"), ParseError);     // unsupported element
  CHECK_THROWS_AS(parse_smiles("O=C=O=O"), ValenceError);
  CHECK_THROWS_AS(parse_smiles("F=F"), ValenceError);
  try {
    parse_smiles("CC)C");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("aromatic subset rules") {
  CHECK_NOTHROW(parse_smiles("c1ccncc1"));     // pyridine
  CHECK_NOTHROW(parse_smiles("c1ccsc1"));      // thiophene
  CHECK_NOTHROW(parse_smiles("c1ccoc1"));      // furan
  CHECK_NOTHROW(parse_smiles("c1ccc2ccccc2c1"));  // naphthalene
  // aromatic bond outside a 5/6 ring
  CHECK_THROWS_AS(parse_smiles("c1ccccc1c1ccccc1"), InvariantError);
  CHECK_NOTHROW(parse_smiles("c1ccccc1-c1ccccc1"));  // explicit single biphenyl
  // pyridine N has no implicit H
  auto pyridine = parse_smiles("n1ccccc1");
  CHECK(implicit_hydrogens(pyridine)[0] == 0);
}

TEST_CASE("charged bracket atoms") {
  MolGraph m = parse_smiles("C[N+](C)(C)C");
  auto h = implicit_hydrogens(m);
  CHECK(h[1] == 0);
  MolGraph alkoxide = parse_smiles("C[O-]");
  CHECK(implicit_hydrogens(alkoxide)[1] == 0);
}

TEST_CASE("write_canonical round trip") {
  for (const char* s :
       {"C", "CC(=O)O", "c1ccccc1", "CC(C)(C)C", "C1CC1CO", "N#CC(N)=O",
        "c1ccc2ccccc2c1", "CC(=O)NC", "OCC(O)C(O)CO", "ClC(Cl)Cl"}) {
    MolGraph m = parse_smiles(s);
    std::string canon = write_canonical(m);
    MolGraph reparsed = parse_smiles(canon);
    CHECK_MESSAGE(brute_force_isomorphic(m, reparsed), "round trip of ", s,
                  " -> ", canon);
    CHECK(write_canonical(reparsed) == canon);
  }
}

TEST_CASE("canonical string invariant under relabeling") {
  std::mt19937_64 rng(7);
  MolGraph benzene = parse_smiles("c1ccccc1");
  std::string ref = write_canonical(benzene);
  for (int i = 0; i < 20; ++i) {
    auto perm = random_permutation(rng, benzene.atoms.size());
    CHECK(write_canonical(relabel(benzene, perm)) == ref);
  }
}

TEST_CASE("canonicalization: 100 relabelings of a random 12-atom graph") {
  std::mt19937_64 rng(11);
  MolGraph m = random_molecule(rng, 12);
  validate_molecule(m);
  std::set<std::string> strings;
  for (int i = 0; i < 100; ++i) {
    auto perm = random_permutation(rng, m.atoms.size());
    strings.insert(write_canonical(relabel(m, perm)));
  }
  CHECK(strings.size() == 1);
}

TEST_CASE("canonical soundness and completeness vs isomorphism oracle") {
  std::mt19937_64 rng(23);
  std::vector<MolGraph> pool;
  for (int i = 0; i < 60; ++i)
    pool.push_back(random_molecule(rng, 4 + static_cast<int>(rng() % 11)));
  std::vector<std::string> canon;
  for (const auto& m : pool) canon.push_back(write_canonical(m));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      bool iso = brute_force_isomorphic(pool[i], pool[j]);
      CHECK_MESSAGE(iso == (canon[i] == canon[j]), "pair ", i, ",", j, ": ",
                    canon[i], " vs ", canon[j]);
    }
  // relabelings must collide exactly
  for (std::size_t i = 0; i < 10; ++i) {
    auto perm = random_permutation(rng, pool[i].atoms.size());
    CHECK(write_canonical(relabel(pool[i], perm)) == canon[i]);
  }
}

TEST_CASE("match_pattern basics") {
  auto p_any_c = parse_pattern("[C;D-9:1]");
  auto methane = parse_smiles("C");
  CHECK(match_pattern(p_any_c, methane).size() == 1);

  auto carbonyl = parse_pattern("[C:1]=O");
  auto ethanol = parse_smiles("CCO");
  CHECK(match_pattern(carbonyl, ethanol).empty());

  auto acetic = parse_smiles("CC(=O)O");
  auto hits = match_pattern(carbonyl, acetic);
  CHECK(hits.size() == 1);
  CHECK(acetic.atoms[hits[0][0]].element == Element::C);
  CHECK(acetic.atoms[hits[0][1]].element == Element::O);
}

TEST_CASE("match_pattern equals brute force on random graphs") {
  std::mt19937_64 rng(31);
  const char* patterns[] = {"[C:1]",      "[C:1]=O",       "[N,O:1]C",
                            "[C;D3:1]",   "[C:1](C)C",     "[*:1]~[*:90]",
                            "[C:1]C(C)O", "[S,N;D1-2:1]"};
  for (int trial = 0; trial < 40; ++trial) {
    MolGraph m = random_molecule(rng, 5 + static_cast<int>(rng() % 8));
    validate_molecule(m);
    for (const char* ps : patterns) {
      auto p = parse_pattern(ps);
      auto got = match_pattern(p, m);
      auto expected = brute_force_match(p, m);
      auto ranks = canonical_ranks(m);
      std::sort(expected.begin(), expected.end(),
                [&](const auto& x, const auto& y) {
                  for (std::size_t i = 0; i < x.size(); ++i)
                    if (ranks[x[i]] != ranks[y[i]])
                      return ranks[x[i]] < ranks[y[i]];
                  return false;
                });
      CHECK_MESSAGE(got == expected, "pattern ", ps);
    }
  }
}

TEST_CASE("apply_template amide coupling") {
  ReactionTemplate amide;
  amide.id = 0;
  amide.arity = 2;
  amide.slot_patterns = {parse_pattern("[C:1](=[O;D1])[O;D1:90]"),
                        parse_pattern("[N;D1-2:1]")};
  amide.bond_order = BondOrder::Single;

  auto acetic = parse_smiles("CC(=O)O");
  auto methylamine = parse_smiles("CN");
  auto result = apply_template(amide, {acetic, methylamine});
  REQUIRE(result);
  auto expected = parse_smiles("CC(=O)NC");  // N-methylacetamide
  CHECK(write_canonical(*result.product) == write_canonical(expected));

  auto ethane = parse_smiles("CC");
  auto failed = apply_template(amide, {ethane, ethane});
  CHECK_FALSE(failed);
  CHECK(failed.error == ApplyError::NoMatch);
  CHECK(failed.slot == 0);
}

TEST_CASE("apply_template identity rewrite") {
  ReactionTemplate identity;
  identity.id = 1;
  identity.arity = 1;
  identity.slot_patterns = {parse_pattern("[C:1]")};
  auto ethanol = parse_smiles("CCO");
  auto result = apply_template(identity, {ethanol});
  REQUIRE(result);
  CHECK(write_canonical(*result.product) == write_canonical(ethanol));
}

TEST_CASE("apply_template intramolecular cyclization") {
  ReactionTemplate lactam;
  lactam.id = 2;
  lactam.arity = 1;
  lactam.slot_patterns = {
      parse_pattern("[C:1](=[O;D1])([O;D1:90])CCC[N;D1:2]")};
  lactam.bond_order = BondOrder::Single;
  auto amino_acid = parse_smiles("NCCCC(=O)O");
  auto result = apply_template(lactam, {amino_acid});
  REQUIRE(result);
  auto expected = parse_smiles("O=C1CCCN1");
  CHECK(write_canonical(*result.product) == write_canonical(expected));
}

TEST_CASE("apply_template determinism under operand relabeling") {
  std::mt19937_64 rng(43);
  ReactionTemplate ester;
  ester.id = 3;
  ester.arity = 2;
  ester.slot_patterns = {parse_pattern("[C:1](=[O;D1])[O;D1:90]"),
                        parse_pattern("[O;D1:1]")};
  ester.bond_order = BondOrder::Single;
  auto acid = parse_smiles("OC(=O)CC(O)CO");
  auto alcohol = parse_smiles("OCC(C)O");
  auto ref = apply_template(ester, {acid, alcohol});
  REQUIRE(ref);
  std::string ref_canon = write_canonical(*ref.product);
  for (int i = 0; i < 10; ++i) {
    auto pa = random_permutation(rng, acid.atoms.size());
    auto pb = random_permutation(rng, alcohol.atoms.size());
    auto out = apply_template(ester, {relabel(acid, pa), relabel(alcohol, pb)});
    REQUIRE(out);
    CHECK(write_canonical(*out.product) == ref_canon);
  }
}

TEST_CASE("pattern invariants enforced") {
  CHECK_THROWS_AS(parse_pattern("CC"), InvariantError);        // no anchor
  CHECK_THROWS_AS(parse_pattern("[C:1][C:1]"), InvariantError);  // two anchors
  CHECK_THROWS_AS(parse_pattern("[C:90][C:1]C[O:90]C"), InvariantError);
}
