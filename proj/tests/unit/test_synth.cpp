#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "prexsyn/chem/smiles.hpp"
#include "prexsyn/synth/program.hpp"
#include "prexsyn/synth/sampler.hpp"
#include "prexsyn/synth/universe_gen.hpp"
#include "prexsyn/util/rng.hpp"

using namespace prexsyn;
using namespace prexsyn::synth;

namespace {

Universe mini_universe() {
  std::vector<BuildingBlock> blocks;
  int id = 0;
  for (const char* s : {"CC(=O)O", "CN", "CCO", "OC(=O)CCN", "CCC"}) {
    BuildingBlock bb;
    bb.id = id++;
    bb.graph = chem::parse_smiles(s);
    bb.canonical = chem::write_canonical(bb.graph);
    blocks.push_back(std::move(bb));
  }
  std::vector<chem::ReactionTemplate> templates;
  chem::ReactionTemplate amide;
  amide.id = 0;
  amide.arity = 2;
  amide.slot_sources = {"[C;D2-3:1](=[O;D1])[O;D1:90]", "[N;D1-2:1]"};
  for (const auto& s : amide.slot_sources)
    amide.slot_patterns.push_back(chem::parse_pattern(s));
  templates.push_back(std::move(amide));
  return {Library(std::move(blocks)), Registry(std::move(templates))};
}

}  // namespace

TEST_CASE("evaluate_postfix push-only and amide programs") {
  Universe u = mini_universe();
  PostfixProgram p1{{Token::bb(3)}};
  auto r1 = evaluate_postfix(p1, u.library, u.registry);
  REQUIRE(r1);
  CHECK(chem::write_canonical(*r1.product) == u.library.block(3).canonical);

  PostfixProgram p2{{Token::bb(0), Token::bb(1), Token::rxn(0)}};
  auto r2 = evaluate_postfix(p2, u.library, u.registry);
  REQUIRE(r2);
  CHECK(chem::write_canonical(*r2.product) ==
        chem::write_canonical(chem::parse_smiles("CC(=O)NC")));

  PostfixProgram bad{{Token::bb(0), Token::bb(1)}};
  auto r3 = evaluate_postfix(bad, u.library, u.registry);
  CHECK_FALSE(r3);
  CHECK(r3.error == EvalErrorKind::MalformedProgram);

  PostfixProgram underflow{{Token::bb(0), Token::rxn(0)}};
  auto r4 = evaluate_postfix(underflow, u.library, u.registry);
  CHECK(r4.error == EvalErrorKind::MalformedProgram);
  CHECK(r4.position == 1);

  PostfixProgram nomatch{{Token::bb(4), Token::bb(4), Token::rxn(0)}};
  auto r5 = evaluate_postfix(nomatch, u.library, u.registry);
  CHECK(r5.error == EvalErrorKind::ReactionFailed);
  CHECK(r5.position == 2);
}

TEST_CASE("grammar validity equals stack simulation") {
  Universe u = mini_universe();
  PostfixProgram good{{Token::bb(0), Token::bb(1), Token::rxn(0)}};
  CHECK(is_grammar_valid(good, u.library, u.registry));
  CHECK(is_grammar_valid(PostfixProgram{{Token::bb(2)}}, u.library, u.registry));
  CHECK_FALSE(is_grammar_valid(PostfixProgram{}, u.library, u.registry));
  CHECK_FALSE(is_grammar_valid(PostfixProgram{{Token::bb(0), Token::bb(1)}},
                               u.library, u.registry));
  CHECK_FALSE(is_grammar_valid(PostfixProgram{{Token::rxn(0)}}, u.library,
                               u.registry));
  CHECK_FALSE(is_grammar_valid(PostfixProgram{{Token::bb(0), Token::bb(9)}},
                               u.library, u.registry));
}

TEST_CASE("program serialization round trip") {
  PostfixProgram p{{Token::bb(12), Token::bb(3), Token::rxn(7)}};
  CHECK(program_to_string(p) == "B12 B3 R7");
  CHECK(program_from_string("B12 B3 R7") == p);
  CHECK_THROWS_AS(program_from_string("Q1"), ParseError);
}

TEST_CASE("compatibility index matches direct scans") {
  UniverseGenConfig cfg;
  cfg.n_blocks = 50;
  cfg.seed = 123;
  Universe u = generate_universe(cfg);
  auto index = CompatibilityIndex::build(u.library, u.registry);
  for (const auto& t : u.registry.templates()) {
    for (int s = 0; s < t.arity; ++s) {
      std::vector<int> direct;
      for (const auto& bb : u.library.blocks())
        if (!chem::match_pattern(t.slot_patterns[s], bb.graph).empty())
          direct.push_back(bb.id);
      CHECK(index.compatible(t.id, s) == direct);
    }
  }
}

TEST_CASE("empty registry gives empty index") {
  Universe u = mini_universe();
  Registry empty;
  auto index = CompatibilityIndex::build(u.library, empty);
  CHECK(index.empty_slots().empty());
}

TEST_CASE("sample_random_pathway always evaluates successfully") {
  UniverseGenConfig gen;
  gen.n_blocks = 60;
  gen.seed = 5;
  Universe u = generate_universe(gen);
  auto index = CompatibilityIndex::build(u.library, u.registry);
  PathwayConfig cfg;
  Rng rng = make_rng(99, 0);
  int produced = 0, with_rxn = 0;
  for (int i = 0; i < 2000; ++i) {
    auto s = sample_random_pathway(rng, u.library, u.registry, index, cfg);
    if (!s) continue;
    ++produced;
    auto eval = evaluate_postfix(s->program, u.library, u.registry);
    REQUIRE_MESSAGE(bool(eval), "program ", program_to_string(s->program));
    CHECK(chem::write_canonical(*eval.product) ==
          chem::write_canonical(s->product));
    if (s->program.tokens.size() > 1) ++with_rxn;
  }
  CHECK(produced > 1800);
  CHECK(with_rxn > 300);
}

TEST_CASE("depth distribution concentrated at zero gives single blocks") {
  Universe u = mini_universe();
  auto index = CompatibilityIndex::build(u.library, u.registry);
  PathwayConfig cfg;
  cfg.max_depth = 0;
  Rng rng = make_rng(7, 1);
  for (int i = 0; i < 50; ++i) {
    auto s = sample_random_pathway(rng, u.library, u.registry, index, cfg);
    REQUIRE(bool(s));
    CHECK(s->program.tokens.size() == 1);
    CHECK(s->program.tokens[0].type == TokenType::BB);
  }
}

TEST_CASE("uniform depth-0 sampling is uniform over the library") {
  UniverseGenConfig gen;
  gen.n_blocks = 20;
  gen.seed = 77;
  Universe u = generate_universe(gen);
  auto index = CompatibilityIndex::build(u.library, u.registry);
  PathwayConfig cfg;
  cfg.max_depth = 0;
  Rng rng = make_rng(1234, 0);
  const int n = 20000;
  std::vector<int> counts(u.library.size(), 0);
  for (int i = 0; i < n; ++i) {
    auto s = sample_random_pathway(rng, u.library, u.registry, index, cfg);
    REQUIRE(bool(s));
    ++counts[s->program.tokens[0].id];
  }
  // chi-square against uniform; 19 dof, 1e-4 critical value ~ 51.6
  double expected = static_cast<double>(n) / u.library.size();
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 51.6);
}

TEST_CASE("detokenize_batch is order-preserving and worker-invariant") {
  UniverseGenConfig gen;
  gen.n_blocks = 40;
  gen.seed = 9;
  Universe u = generate_universe(gen);
  auto index = CompatibilityIndex::build(u.library, u.registry);
  PathwayConfig cfg;
  Rng rng = make_rng(55, 0);
  std::vector<PostfixProgram> programs;
  std::vector<std::size_t> malformed_at;
  for (int i = 0; i < 400; ++i) {
    auto s = sample_random_pathway(rng, u.library, u.registry, index, cfg);
    if (!s) continue;
    programs.push_back(s->program);
    if (i % 17 == 0) {
      malformed_at.push_back(programs.size());
      programs.push_back(PostfixProgram{{Token::bb(0), Token::bb(1)}});
    }
  }
  auto seq = detokenize_batch(programs, u.library, u.registry, 1);
  auto par = detokenize_batch(programs, u.library, u.registry, 8);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(bool(seq[i]) == bool(par[i]));
    if (seq[i])
      CHECK(chem::write_canonical(*seq[i].product) ==
            chem::write_canonical(*par[i].product));
    else
      CHECK(seq[i].error == par[i].error);
  }
  for (std::size_t pos : malformed_at) {
    CHECK_FALSE(seq[pos]);
    CHECK(seq[pos].error == EvalErrorKind::MalformedProgram);
  }
}

TEST_CASE("universe files round trip") {
  UniverseGenConfig gen;
  gen.n_blocks = 30;
  gen.seed = 3;
  Universe u = generate_universe(gen);
  auto dir = std::filesystem::temp_directory_path() / "prexsyn_test_universe";
  std::filesystem::create_directories(dir);
  save_library(u.library, dir / "library.tsv");
  save_registry(u.registry, dir / "templates.tsv");
  Universe loaded = load_universe(dir);
  REQUIRE(loaded.library.size() == u.library.size());
  for (int i = 0; i < u.library.size(); ++i)
    CHECK(loaded.library.block(i).canonical == u.library.block(i).canonical);
  REQUIRE(loaded.registry.size() == u.registry.size());
  for (int i = 0; i < u.registry.size(); ++i) {
    CHECK(loaded.registry.rxn(i).arity == u.registry.rxn(i).arity);
    CHECK(loaded.registry.rxn(i).slot_sources == u.registry.rxn(i).slot_sources);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("default universe: every template slot nonempty") {
  UniverseGenConfig gen;  // defaults: 300 blocks, seed 0
  Universe u = generate_universe(gen);
  CHECK(u.library.size() == 300);
  auto index = CompatibilityIndex::build(u.library, u.registry, 2);
  CHECK(index.empty_slots().empty());
  // determinism
  Universe again = generate_universe(gen);
  for (int i = 0; i < 5; ++i)
    CHECK(again.library.block(i).canonical == u.library.block(i).canonical);
}
