#pragma once

#include <cstdint>
#include <vector>

#include "prexsyn/engine/pipeline.hpp"

namespace prexsyn::engine {

// Type codes in FeaturizedBatch::type_ids. BB/RXN/End mirror
// synth::TokenType; Pad marks positions past END.
inline constexpr std::int8_t kTypeBB = 0;
inline constexpr std::int8_t kTypeRXN = 1;
inline constexpr std::int8_t kTypeEnd = 2;
inline constexpr std::int8_t kTypePad = 3;

struct VocabLayout {
  int n_bb = 0;
  int n_rxn = 0;
  int fp_bits = props::kFingerprintBits;
  int frag_table = props::kFragmentTableSize;
};

// Row r encodes the r-th sample's program tokens followed by END and PAD.
// token_ids holds within-type ids (0 for END/PAD); the loss mask covers
// exactly the token positions plus END.
struct FeaturizedBatch {
  int batch = 0;
  int width = 0;  // max program length + 1 (END slot)
  std::vector<std::int32_t> token_ids;  // [batch * width]
  std::vector<std::int8_t> type_ids;    // [batch * width]
  std::vector<float> mask;              // [batch * width]
  std::vector<std::int8_t> prompt_types;  // [batch]
  std::vector<float> fp_payload;    // [batch * fp_bits], 0/1
  std::vector<float> frag_payload;  // [batch * frag_table], multi-hot
  std::vector<float> desc_payload;  // [batch * kDescriptorCount], normalized

  int index(int row, int col) const { return row * width + col; }
};

FeaturizedBatch featurize(const std::vector<TrainingSample>& samples,
                          const VocabLayout& layout);

// Inverse over the token portion; used by round-trip tests and decoding.
std::vector<synth::PostfixProgram> decode_tokens(const FeaturizedBatch& batch);

// Prompt -> dense payload encoding shared by featurize and the sampler.
void encode_prompt_payload(const props::PropertyPrompt& prompt,
                           const VocabLayout& layout, float* fp_out,
                           float* frag_out, float* desc_out);

}  // namespace prexsyn::engine
