#include "prexsyn/engine/featurize.hpp"

#include <algorithm>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::engine {

void encode_prompt_payload(const props::PropertyPrompt& prompt,
                           const VocabLayout& layout, float* fp_out,
                           float* frag_out, float* desc_out) {
  using props::PropertyType;
  switch (prompt.type) {
    case PropertyType::FpStruct:
    case PropertyType::FpPharm:
      if (prompt.fp.bits() != layout.fp_bits)
        throw InvariantError("fingerprint width does not match vocab layout");
      for (int i = 0; i < layout.fp_bits; ++i)
        fp_out[i] = prompt.fp.test(i) ? 1.0f : 0.0f;
      break;
    case PropertyType::Fragments:
    case PropertyType::Substruct:
      for (auto id : prompt.frags.ids) {
        if (static_cast<int>(id) >= layout.frag_table)
          throw InvariantError("fragment id outside table");
        frag_out[id] = 1.0f;
      }
      break;
    case PropertyType::Descriptors: {
      auto values = prompt.desc.as_array();
      for (int i = 0; i < props::kDescriptorCount; ++i)
        desc_out[i] = static_cast<float>(props::normalize_descriptor(
            static_cast<props::DescriptorField>(i), values[i]));
      break;
    }
  }
}

FeaturizedBatch featurize(const std::vector<TrainingSample>& samples,
                          const VocabLayout& layout) {
  FeaturizedBatch out;
  out.batch = static_cast<int>(samples.size());
  int max_tokens = 0;
  for (const auto& s : samples)
    max_tokens = std::max(max_tokens, static_cast<int>(s.program.tokens.size()));
  out.width = max_tokens + 1;  // END slot
  out.token_ids.assign(static_cast<std::size_t>(out.batch) * out.width, 0);
  out.type_ids.assign(static_cast<std::size_t>(out.batch) * out.width,
                      kTypePad);
  out.mask.assign(static_cast<std::size_t>(out.batch) * out.width, 0.0f);
  out.prompt_types.resize(out.batch);
  out.fp_payload.assign(static_cast<std::size_t>(out.batch) * layout.fp_bits,
                        0.0f);
  out.frag_payload.assign(
      static_cast<std::size_t>(out.batch) * layout.frag_table, 0.0f);
  out.desc_payload.assign(
      static_cast<std::size_t>(out.batch) * props::kDescriptorCount, 0.0f);

  for (int r = 0; r < out.batch; ++r) {
    const auto& s = samples[r];
    const auto& tokens = s.program.tokens;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      const auto& t = tokens[j];
      if (t.type == synth::TokenType::BB) {
        if (t.id < 0 || t.id >= layout.n_bb)
          throw InvariantError("BB token id outside vocab");
        out.type_ids[out.index(r, j)] = kTypeBB;
      } else if (t.type == synth::TokenType::RXN) {
        if (t.id < 0 || t.id >= layout.n_rxn)
          throw InvariantError("RXN token id outside vocab");
        out.type_ids[out.index(r, j)] = kTypeRXN;
      } else {
        throw InvariantError("sentinel token inside a stored program");
      }
      out.token_ids[out.index(r, j)] = t.id;
      out.mask[out.index(r, j)] = 1.0f;
    }
    int end_pos = static_cast<int>(tokens.size());
    out.type_ids[out.index(r, end_pos)] = kTypeEnd;
    out.mask[out.index(r, end_pos)] = 1.0f;

    out.prompt_types[r] = static_cast<std::int8_t>(s.prompt.type);
    encode_prompt_payload(
        s.prompt, layout, out.fp_payload.data() + std::size_t(r) * layout.fp_bits,
        out.frag_payload.data() + std::size_t(r) * layout.frag_table,
        out.desc_payload.data() + std::size_t(r) * props::kDescriptorCount);
  }
  return out;
}

std::vector<synth::PostfixProgram> decode_tokens(const FeaturizedBatch& batch) {
  std::vector<synth::PostfixProgram> out(batch.batch);
  for (int r = 0; r < batch.batch; ++r) {
    for (int j = 0; j < batch.width; ++j) {
      std::int8_t type = batch.type_ids[batch.index(r, j)];
      if (type == kTypeEnd || type == kTypePad) break;
      auto id = batch.token_ids[batch.index(r, j)];
      out[r].tokens.push_back(type == kTypeBB ? synth::Token::bb(id)
                                              : synth::Token::rxn(id));
    }
  }
  return out;
}

}  // namespace prexsyn::engine
