#include "prexsyn/synth/sampler.hpp"

#include <atomic>
#include <thread>

#include "prexsyn/util/rng.hpp"

namespace prexsyn::synth {

CompatibilityIndex CompatibilityIndex::build(const Library& lib,
                                             const Registry& reg,
                                             int workers) {
  CompatibilityIndex index;
  std::vector<std::pair<int, int>> keys;
  for (const auto& t : reg.templates())
    for (int s = 0; s < t.arity; ++s) keys.push_back({t.id, s});
  std::vector<std::vector<int>> lists(keys.size());

  auto fill = [&](std::size_t k) {
    const auto& [tid, slot] = keys[k];
    const auto& pattern = reg.rxn(tid).slot_patterns[slot];
    for (const auto& bb : lib.blocks())
      if (chem::has_match(pattern, bb.graph)) lists[k].push_back(bb.id);
  };

  if (workers <= 1) {
    for (std::size_t k = 0; k < keys.size(); ++k) fill(k);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
      while (true) {
        std::size_t k = cursor.fetch_add(1);
        if (k >= keys.size()) return;
        fill(k);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (lists[k].empty()) index.empty_slots_.push_back(keys[k]);
    index.slots_[keys[k]] = std::move(lists[k]);
  }
  return index;
}

namespace {

struct TreeBuilder {
  Rng& rng;
  const Library& lib;
  const Registry& reg;
  const CompatibilityIndex& index;
  const PathwayConfig& cfg;
  int retries_left;

  // Build a subtree with exactly `reactions` reactions; appends tokens in
  // postfix order. Returns the product graph or nullopt on failure (budget
  // already decremented).
  std::optional<chem::MolGraph> build(int reactions,
                                      std::vector<Token>& tokens) {
    if (reactions == 0) {
      int id = static_cast<int>(rng() % lib.size());
      tokens.push_back(Token::bb(id));
      return lib.block(id).graph;
    }
    while (true) {
      std::size_t checkpoint = tokens.size();
      const auto& t = reg.rxn(static_cast<int>(rng() % reg.size()));
      std::optional<chem::MolGraph> product = try_template(t, reactions, tokens);
      if (product) {
        if (static_cast<int>(product->atoms.size()) <= cfg.max_product_atoms) {
          tokens.push_back(Token::rxn(t.id));
          return product;
        }
      }
      tokens.resize(checkpoint);
      if (--retries_left < 0) return std::nullopt;
    }
  }

  std::optional<chem::MolGraph> try_template(const chem::ReactionTemplate& t,
                                             int reactions,
                                             std::vector<Token>& tokens) {
    int remaining = reactions - 1;
    std::vector<int> child_reactions(t.arity, 0);
    if (t.arity == 1) {
      child_reactions[0] = remaining;
    } else {
      child_reactions[0] = remaining > 0
                               ? static_cast<int>(rng() % (remaining + 1))
                               : 0;
      child_reactions[1] = remaining - child_reactions[0];
    }
    std::vector<chem::MolGraph> operands;
    for (int s = 0; s < t.arity; ++s) {
      if (child_reactions[s] == 0) {
        // leaf: draw uniformly from the compatible set
        const auto& pool = index.compatible(t.id, s);
        if (pool.empty()) return std::nullopt;
        int id = pool[rng() % pool.size()];
        tokens.push_back(Token::bb(id));
        operands.push_back(lib.block(id).graph);
      } else {
        auto sub = build(child_reactions[s], tokens);
        if (!sub) return std::nullopt;
        // intermediate products must re-match the slot pattern
        if (!chem::has_match(t.slot_patterns[s], *sub)) return std::nullopt;
        operands.push_back(std::move(*sub));
      }
    }
    auto applied = chem::apply_template(t, operands);
    if (!applied) return std::nullopt;
    return std::move(*applied.product);
  }
};

int draw_reaction_count(Rng& rng, const PathwayConfig& cfg) {
  // geometric(p) truncated at max_depth, renormalized
  double z = 0.0, q = 1.0;
  for (int k = 0; k <= cfg.max_depth; ++k) {
    z += q * cfg.depth_p;
    q *= 1.0 - cfg.depth_p;
  }
  double u = uniform_real(rng) * z;
  double acc = 0.0;
  q = 1.0;
  for (int k = 0; k <= cfg.max_depth; ++k) {
    acc += q * cfg.depth_p;
    if (u <= acc) return k;
    q *= 1.0 - cfg.depth_p;
  }
  return cfg.max_depth;
}

}  // namespace

std::optional<PathwaySample> sample_random_pathway(
    Rng& rng, const Library& lib, const Registry& reg,
    const CompatibilityIndex& index, const PathwayConfig& cfg) {
  if (lib.size() == 0) throw InvariantError("empty building-block library");
  int reactions = draw_reaction_count(rng, cfg);
  if (reactions > 0 && reg.size() == 0) reactions = 0;
  TreeBuilder builder{rng, lib, reg, index, cfg, cfg.retry_budget};
  PathwaySample sample;
  auto product = builder.build(reactions, sample.program.tokens);
  if (!product) return std::nullopt;
  sample.product = std::move(*product);
  return sample;
}

}  // namespace prexsyn::synth
