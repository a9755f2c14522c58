#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "prexsyn/engine/featurize.hpp"
#include "prexsyn/model/config.hpp"
#include "prexsyn/model/param_store.hpp"

namespace prexsyn::model {

// Targets of the two-level head.
inline constexpr int kTypeClassBB = 0;
inline constexpr int kTypeClassRXN = 1;
inline constexpr int kTypeClassEnd = 2;
inline constexpr int kTypeClassCount = 3;

template <typename Scalar>
Scalar gelu(Scalar x) {
  return Scalar(0.5) * x * (Scalar(1) + std::erf(x * Scalar(M_SQRT1_2)));
}

template <typename Scalar>
Scalar gelu_grad(Scalar x) {
  Scalar cdf = Scalar(0.5) * (Scalar(1) + std::erf(x * Scalar(M_SQRT1_2)));
  Scalar pdf = std::exp(Scalar(-0.5) * x * x) *
               Scalar(0.3989422804014326779);  // 1/sqrt(2*pi)
  return cdf + x * pdf;
}

// Decoder-only transformer with property-prompt conditioning and the
// two-level (type, within-type token) prediction head. Pre-LN blocks,
// learned (or sinusoidal) absolute positions. The input sequence is
// [prompt, START, s_1 .. s_T]; position p predicts target cell p-1 of the
// featurized batch (tokens, then END).
template <typename Scalar>
class Transformer {
 public:
  explicit Transformer(ModelConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    build_layout();
  }

  const ModelConfig& config() const { return cfg_; }
  ParamStore<Scalar>& store() { return store_; }
  const ParamStore<Scalar>& store() const { return store_; }

  void init_params(std::uint64_t seed) {
    Rng rng = make_rng(seed, 0x1417);
    store_.init_normal(rng, Scalar(0.02));
    for (int l = 0; l < cfg_.layers; ++l) {
      store_.param(ln1g(l)).setOnes();
      store_.param(ln1b(l)).setZero();
      store_.param(ln2g(l)).setOnes();
      store_.param(ln2b(l)).setZero();
      for (const char* b : {"bq", "bk", "bv", "bo", "b1", "b2"})
        store_.param(layer_name(l, b)).setZero();
    }
    store_.param("lnf_g").setOnes();
    store_.param("lnf_b").setZero();
    store_.param("type_b").setZero();
    store_.param("bb_b").setZero();
    store_.param("rxn_b").setZero();
    if (cfg_.sinusoidal_pos) fill_sinusoidal();
  }

  struct Input {
    int batch = 0;
    int token_width = 0;  // token positions, END/PAD excluded
    std::vector<std::int32_t> token_ids;
    std::vector<std::int8_t> type_ids;
    std::vector<std::int8_t> prompt_types;
    const float* fp_payload = nullptr;
    const float* frag_payload = nullptr;
    const float* desc_payload = nullptr;

    int index(int r, int c) const { return r * token_width + c; }
    int seq_len() const { return token_width + 2; }

    static Input from_batch(const engine::FeaturizedBatch& fb) {
      Input in;
      in.batch = fb.batch;
      in.token_width = fb.width - 1;  // drop the END slot from inputs
      in.token_ids.resize(std::size_t(in.batch) * in.token_width);
      in.type_ids.assign(std::size_t(in.batch) * in.token_width,
                         engine::kTypePad);
      for (int r = 0; r < in.batch; ++r)
        for (int c = 0; c < in.token_width; ++c) {
          auto t = fb.type_ids[fb.index(r, c)];
          // END and PAD cells are targets only, never inputs
          in.type_ids[in.index(r, c)] =
              (t == engine::kTypeBB || t == engine::kTypeRXN)
                  ? t
                  : engine::kTypePad;
          in.token_ids[in.index(r, c)] = fb.token_ids[fb.index(r, c)];
        }
      in.prompt_types = fb.prompt_types;
      in.fp_payload = fb.fp_payload.data();
      in.frag_payload = fb.frag_payload.data();
      in.desc_payload = fb.desc_payload.data();
      return in;
    }
  };

  struct LayerCache {
    MatrixX<Scalar> ln1_xhat, ln2_xhat;
    MatrixX<Scalar> ln1_istd, ln2_istd;  // [BL, 1]
    MatrixX<Scalar> q, k, v, probs, ctx;
    MatrixX<Scalar> x_attn;  // input + attention (residual done)
    MatrixX<Scalar> h1, act;
  };

  struct Forwarded {
    int batch = 0, seq = 0;
    bool last_only = false;
    MatrixX<Scalar> x0;
    std::vector<LayerCache> layers;
    MatrixX<Scalar> x_final;  // after last residual
    MatrixX<Scalar> lnf_xhat, lnf_istd;
    MatrixX<Scalar> head_in;  // rows fed to the heads
    MatrixX<Scalar> type_logits, bb_logits, rxn_logits;
  };

  Forwarded forward(const Input& in, bool last_only = false) const;

  struct LossStats {
    double loss = 0.0;
    double type_acc = 0.0;
    double token_acc = 0.0;
    std::size_t masked = 0;
  };

  LossStats loss(const Forwarded& fwd,
                 const engine::FeaturizedBatch& batch) const;

  // Accumulates parameter gradients (store().zero_grad() is the caller's
  // job) and returns the same statistics as loss().
  LossStats backward(const Forwarded& fwd, const Input& in,
                     const engine::FeaturizedBatch& batch);

  // Per-position full-vocabulary log-probabilities assembled from the
  // two-level head; the canonical "logits" for composition.
  std::vector<double> full_logprobs(const Forwarded& fwd, int row) const;

  std::string layer_name(int l, const std::string& tensor) const {
    return "L" + std::to_string(l) + "." + tensor;
  }

 private:
  std::string ln1g(int l) const { return layer_name(l, "ln1_g"); }
  std::string ln1b(int l) const { return layer_name(l, "ln1_b"); }
  std::string ln2g(int l) const { return layer_name(l, "ln2_g"); }
  std::string ln2b(int l) const { return layer_name(l, "ln2_b"); }

  void build_layout() {
    const int D = cfg_.dim, F = cfg_.ff_dim;
    store_.add("bb_embed", cfg_.n_bb, D);
    store_.add("rxn_embed", std::max(cfg_.n_rxn, 1), D);
    store_.add("start_embed", 1, D);
    store_.add("prompt_type_embed", props::kPropertyTypeCount, D);
    store_.add("fp_struct_proj", cfg_.fp_bits, D);
    store_.add("fp_pharm_proj", cfg_.fp_bits, D);
    store_.add("frag_proj", cfg_.frag_table, D);
    store_.add("substruct_proj", cfg_.frag_table, D);
    store_.add("desc_proj", props::kDescriptorCount, D);
    store_.add("pos_embed", cfg_.max_seq, D);
    for (int l = 0; l < cfg_.layers; ++l) {
      store_.add(ln1g(l), 1, D);
      store_.add(ln1b(l), 1, D);
      store_.add(layer_name(l, "wq"), D, D);
      store_.add(layer_name(l, "bq"), 1, D);
      store_.add(layer_name(l, "wk"), D, D);
      store_.add(layer_name(l, "bk"), 1, D);
      store_.add(layer_name(l, "wv"), D, D);
      store_.add(layer_name(l, "bv"), 1, D);
      store_.add(layer_name(l, "wo"), D, D);
      store_.add(layer_name(l, "bo"), 1, D);
      store_.add(ln2g(l), 1, D);
      store_.add(ln2b(l), 1, D);
      store_.add(layer_name(l, "w1"), D, F);
      store_.add(layer_name(l, "b1"), 1, F);
      store_.add(layer_name(l, "w2"), F, D);
      store_.add(layer_name(l, "b2"), 1, D);
    }
    store_.add("lnf_g", 1, D);
    store_.add("lnf_b", 1, D);
    store_.add("type_w", D, kTypeClassCount);
    store_.add("type_b", 1, kTypeClassCount);
    store_.add("bb_w", D, cfg_.n_bb);
    store_.add("bb_b", 1, cfg_.n_bb);
    store_.add("rxn_w", D, std::max(cfg_.n_rxn, 1));
    store_.add("rxn_b", 1, std::max(cfg_.n_rxn, 1));
    store_.finalize();
  }

  void fill_sinusoidal() {
    auto pos = store_.param("pos_embed");
    for (int p = 0; p < cfg_.max_seq; ++p)
      for (int i = 0; i < cfg_.dim; ++i) {
        double angle =
            p / std::pow(10000.0, double(2 * (i / 2)) / cfg_.dim);
        pos(p, i) = Scalar(i % 2 == 0 ? std::sin(angle) : std::cos(angle));
      }
  }

  void embed(const Input& in, MatrixX<Scalar>& x0) const;
  void layer_norm(const ConstMatMap<Scalar>& gamma,
                  const ConstMatMap<Scalar>& beta, const MatrixX<Scalar>& x,
                  MatrixX<Scalar>& out, MatrixX<Scalar>& xhat,
                  MatrixX<Scalar>& istd) const;
  void layer_norm_backward(const ConstMatMap<Scalar>& gamma,
                           const MatrixX<Scalar>& xhat,
                           const MatrixX<Scalar>& istd,
                           const MatrixX<Scalar>& dout, MatMap<Scalar> dgamma,
                           MatMap<Scalar> dbeta, MatrixX<Scalar>& dx) const;

  ModelConfig cfg_;
  ParamStore<Scalar> store_;
};

extern template class Transformer<float>;
extern template class Transformer<double>;

}  // namespace prexsyn::model
