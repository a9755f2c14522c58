#include "prexsyn/chem/rxn.hpp"

#include <algorithm>
#include <deque>

namespace prexsyn::chem {

namespace {

struct Placement {
  std::vector<int> embedding;  // pattern atom -> operand atom
  int offset = 0;              // operand atom -> combined index
};

MolGraph take_component(const MolGraph& g, int seed_atom, int* mapped_anchor,
                        int* mapped_anchor2) {
  Adjacency adj(g);
  std::vector<int> remap(g.atoms.size(), -1);
  std::deque<int> queue{seed_atom};
  remap[seed_atom] = 0;
  MolGraph out;
  out.atoms.push_back(g.atoms[seed_atom]);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto* e = adj.begin(u); e != adj.end(u); ++e) {
      if (remap[e->neighbor] < 0) {
        remap[e->neighbor] = static_cast<int>(out.atoms.size());
        out.atoms.push_back(g.atoms[e->neighbor]);
        queue.push_back(e->neighbor);
      }
    }
  }
  for (const auto& b : g.bonds)
    if (remap[b.a] >= 0 && remap[b.b] >= 0)
      out.add_bond(remap[b.a], remap[b.b], b.order);
  if (mapped_anchor) *mapped_anchor = remap[*mapped_anchor];
  if (mapped_anchor2 && *mapped_anchor2 >= 0)
    *mapped_anchor2 = remap[*mapped_anchor2];
  return out;
}

}  // namespace

ApplyResult apply_template(const ReactionTemplate& t,
                           const std::vector<MolGraph>& operands) {
  ApplyResult result;
  if (static_cast<int>(operands.size()) != t.arity)
    throw InvariantError("operand count does not match template arity");

  std::vector<Placement> placements(t.arity);
  int offset = 0;
  for (int slot = 0; slot < t.arity; ++slot) {
    auto embeddings = match_pattern(t.slot_patterns[slot], operands[slot]);
    if (embeddings.empty()) {
      result.error = ApplyError::NoMatch;
      result.slot = slot;
      return result;
    }
    placements[slot] = {std::move(embeddings.front()), offset};
    offset += static_cast<int>(operands[slot].atoms.size());
  }

  MolGraph combined;
  combined.atoms.reserve(offset);
  for (const auto& op : operands) {
    int base = static_cast<int>(combined.atoms.size());
    for (const auto& a : op.atoms) combined.atoms.push_back(a);
    for (const auto& b : op.bonds)
      combined.add_bond(base + b.a, base + b.b, b.order);
  }

  std::vector<bool> deleted(combined.atoms.size(), false);
  for (int slot = 0; slot < t.arity; ++slot) {
    const PatternGraph& pat = t.slot_patterns[slot];
    for (int leaving : pat.leaving)
      deleted[placements[slot].offset + placements[slot].embedding[leaving]] =
          true;
  }

  int anchor_a = -1, anchor_b = -1;
  if (t.arity == 2) {
    anchor_a = placements[0].offset +
               placements[0].embedding[t.slot_patterns[0].anchor];
    anchor_b = placements[1].offset +
               placements[1].embedding[t.slot_patterns[1].anchor];
  } else {
    const PatternGraph& pat = t.slot_patterns[0];
    anchor_a = placements[0].embedding[pat.anchor];
    if (pat.anchor2 >= 0) anchor_b = placements[0].embedding[pat.anchor2];
  }

  MolGraph pruned;
  std::vector<int> remap(combined.atoms.size(), -1);
  for (std::size_t i = 0; i < combined.atoms.size(); ++i) {
    if (deleted[i]) continue;
    remap[i] = static_cast<int>(pruned.atoms.size());
    pruned.atoms.push_back(combined.atoms[i]);
  }
  for (const auto& b : combined.bonds)
    if (remap[b.a] >= 0 && remap[b.b] >= 0)
      pruned.add_bond(remap[b.a], remap[b.b], b.order);

  anchor_a = remap[anchor_a];
  if (anchor_b >= 0) anchor_b = remap[anchor_b];
  if (anchor_a < 0 || (t.arity == 2 && anchor_b < 0))
    throw InvariantError("anchor deleted by leaving set");

  if (anchor_b >= 0) {
    for (const auto& b : pruned.bonds) {
      if ((b.a == anchor_a && b.b == anchor_b) ||
          (b.a == anchor_b && b.b == anchor_a)) {
        result.error = ApplyError::ValenceViolation;
        return result;
      }
    }
    pruned.add_bond(anchor_a, anchor_b, t.bond_order);
  }

  int final_anchor = anchor_a;
  int final_anchor2 = anchor_b;
  MolGraph product =
      take_component(pruned, anchor_a, &final_anchor, &final_anchor2);
  if (t.arity == 2 && final_anchor2 < 0) {
    // anchors were bonded above, so they share a component by construction
    result.error = ApplyError::DisconnectedProduct;
    return result;
  }

  try {
    validate_molecule(product, /*require_connected=*/true);
  } catch (const ValenceError&) {
    result.error = ApplyError::ValenceViolation;
    return result;
  } catch (const InvariantError&) {
    result.error = ApplyError::ValenceViolation;
    return result;
  }
  result.product = std::move(product);
  return result;
}

}  // namespace prexsyn::chem
