#include "prexsyn/model/config.hpp"

namespace prexsyn::model {

ModelConfig named_config(const std::string& name) {
  ModelConfig cfg;
  if (name == "desk") {
    cfg.layers = 4;
    cfg.dim = 256;
    cfg.ff_dim = 512;
    cfg.heads = 8;
  } else if (name == "small") {
    cfg.layers = 3;
    cfg.dim = 128;
    cfg.ff_dim = 256;
    cfg.heads = 4;
  } else if (name == "paper") {
    cfg.layers = 12;
    cfg.dim = 1024;
    cfg.ff_dim = 2048;
    cfg.heads = 16;
  } else if (name == "tiny") {
    cfg.layers = 1;
    cfg.dim = 8;
    cfg.ff_dim = 16;
    cfg.heads = 2;
    cfg.fp_bits = 64;
    cfg.frag_table = 64;
    cfg.max_seq = 12;
  } else {
    throw ConfigError("unknown model config '" + name +
                      "' (expected desk, small, paper, or tiny)");
  }
  return cfg;
}

}  // namespace prexsyn::model
