#pragma once

#include <string>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::model {

struct ModelConfig {
  int layers = 4;
  int dim = 256;
  int ff_dim = 512;
  int heads = 8;
  int max_seq = 20;  // input positions: prompt + START + tokens
  int n_bb = 0;
  int n_rxn = 0;
  int fp_bits = 2048;
  int frag_table = 4096;
  bool sinusoidal_pos = false;  // learned absolute by default

  int head_dim() const { return dim / heads; }

  void validate() const {
    if (dim % heads != 0)
      throw ConfigError("model dim must be divisible by heads");
    if (layers < 1 || dim < 2 || ff_dim < 1 || heads < 1 || max_seq < 3)
      throw ConfigError("degenerate model config");
    if (n_bb < 1 || n_rxn < 0) throw ConfigError("vocab sizes unset");
  }
};

// Named presets; vocab sizes are filled from the universe afterwards.
// "desk" is the default working size, "paper" mirrors the full-scale
// configuration (12 layers, dim 1024, ff 2048, 16 heads), "small" trades
// capacity for step time, "tiny" is the gradient-check size.
ModelConfig named_config(const std::string& name);

}  // namespace prexsyn::model
