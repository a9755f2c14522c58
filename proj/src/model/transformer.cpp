#include "prexsyn/model/transformer.hpp"

#include <algorithm>
#include <utility>

namespace prexsyn::model {

namespace {

// log-softmax over a short row, in the model scalar type
template <typename Scalar, typename Derived>
void log_softmax_row(const Eigen::MatrixBase<Derived>& row,
                     std::vector<double>& out) {
  const int n = static_cast<int>(row.size());
  out.resize(n);
  double mx = -1e300;
  for (int i = 0; i < n; ++i) mx = std::max(mx, double(row(i)));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(double(row(i)) - mx);
  double lse = mx + std::log(sum);
  for (int i = 0; i < n; ++i) out[i] = double(row(i)) - lse;
}

}  // namespace

template <typename Scalar>
void Transformer<Scalar>::embed(const Input& in, MatrixX<Scalar>& x0) const {
  const int D = cfg_.dim;
  const int L = in.seq_len();
  if (L > cfg_.max_seq)
    throw InvariantError("sequence length " + std::to_string(L) +
                         " exceeds max_seq " + std::to_string(cfg_.max_seq));
  x0.setZero(std::size_t(in.batch) * L, D);
  auto bb_embed = store_.param("bb_embed");
  auto rxn_embed = store_.param("rxn_embed");
  auto start = store_.param("start_embed");
  auto type_embed = store_.param("prompt_type_embed");
  auto pos = store_.param("pos_embed");
  auto fp_struct_proj = store_.param("fp_struct_proj");
  auto fp_pharm_proj = store_.param("fp_pharm_proj");
  auto frag_proj = store_.param("frag_proj");
  auto substruct_proj = store_.param("substruct_proj");
  auto desc_proj = store_.param("desc_proj");

  for (int b = 0; b < in.batch; ++b) {
    const int base = b * L;
    auto prompt_row = x0.row(base);
    auto pt = static_cast<props::PropertyType>(in.prompt_types[b]);
    switch (pt) {
      case props::PropertyType::FpStruct:
      case props::PropertyType::FpPharm: {
        const float* payload = in.fp_payload + std::size_t(b) * cfg_.fp_bits;
        const auto& proj =
            pt == props::PropertyType::FpStruct ? fp_struct_proj : fp_pharm_proj;
        for (int i = 0; i < cfg_.fp_bits; ++i)
          if (payload[i] != 0.0f)
            prompt_row += Scalar(payload[i]) * proj.row(i);
        break;
      }
      case props::PropertyType::Fragments:
      case props::PropertyType::Substruct: {
        const float* payload =
            in.frag_payload + std::size_t(b) * cfg_.frag_table;
        const auto& proj = pt == props::PropertyType::Fragments
                               ? frag_proj
                               : substruct_proj;
        for (int i = 0; i < cfg_.frag_table; ++i)
          if (payload[i] != 0.0f)
            prompt_row += Scalar(payload[i]) * proj.row(i);
        break;
      }
      case props::PropertyType::Descriptors: {
        const float* payload =
            in.desc_payload + std::size_t(b) * props::kDescriptorCount;
        for (int i = 0; i < props::kDescriptorCount; ++i)
          prompt_row += Scalar(payload[i]) * desc_proj.row(i);
        break;
      }
    }
    prompt_row += type_embed.row(static_cast<int>(pt));
    prompt_row += pos.row(0);

    x0.row(base + 1) = start.row(0) + pos.row(1);

    for (int c = 0; c < in.token_width; ++c) {
      auto row = x0.row(base + 2 + c);
      auto t = in.type_ids[in.index(b, c)];
      if (t == engine::kTypeBB)
        row = bb_embed.row(in.token_ids[in.index(b, c)]);
      else if (t == engine::kTypeRXN)
        row = rxn_embed.row(in.token_ids[in.index(b, c)]);
      row += pos.row(2 + c);
    }
  }
}

template <typename Scalar>
void Transformer<Scalar>::layer_norm(const ConstMatMap<Scalar>& gamma,
                                     const ConstMatMap<Scalar>& beta,
                                     const MatrixX<Scalar>& x,
                                     MatrixX<Scalar>& out,
                                     MatrixX<Scalar>& xhat,
                                     MatrixX<Scalar>& istd) const {
  const int D = cfg_.dim;
  const auto rows = x.rows();
  out.resize(rows, D);
  xhat.resize(rows, D);
  istd.resize(rows, 1);
  constexpr Scalar eps = Scalar(1e-5);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Scalar mean = x.row(r).mean();
    Scalar var = (x.row(r).array() - mean).square().mean();
    Scalar inv = Scalar(1) / std::sqrt(var + eps);
    istd(r, 0) = inv;
    xhat.row(r) = (x.row(r).array() - mean) * inv;
    out.row(r) =
        xhat.row(r).cwiseProduct(gamma.row(0)) + beta.row(0);
  }
}

template <typename Scalar>
void Transformer<Scalar>::layer_norm_backward(
    const ConstMatMap<Scalar>& gamma, const MatrixX<Scalar>& xhat,
    const MatrixX<Scalar>& istd, const MatrixX<Scalar>& dout,
    MatMap<Scalar> dgamma, MatMap<Scalar> dbeta, MatrixX<Scalar>& dx) const {
  const int D = cfg_.dim;
  const auto rows = xhat.rows();
  dx.resize(rows, D);
  for (Eigen::Index r = 0; r < rows; ++r) {
    dgamma.row(0) += dout.row(r).cwiseProduct(xhat.row(r));
    dbeta.row(0) += dout.row(r);
    // dl/dxhat
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dxhat =
        dout.row(r).cwiseProduct(gamma.row(0));
    Scalar m1 = dxhat.mean();
    Scalar m2 = dxhat.cwiseProduct(xhat.row(r)).mean();
    dx.row(r) =
        (dxhat.array() - m1 - xhat.row(r).array() * m2) * istd(r, 0);
  }
}

template <typename Scalar>
typename Transformer<Scalar>::Forwarded Transformer<Scalar>::forward(
    const Input& in, bool last_only) const {
  const int D = cfg_.dim, H = cfg_.heads, dh = cfg_.head_dim();
  const int L = in.seq_len();
  const int B = in.batch;
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dh));

  Forwarded fwd;
  fwd.batch = B;
  fwd.seq = L;
  fwd.last_only = last_only;
  embed(in, fwd.x0);
  fwd.layers.resize(cfg_.layers);

  const MatrixX<Scalar>* x = &fwd.x0;
  MatrixX<Scalar> ln_out;
  for (int l = 0; l < cfg_.layers; ++l) {
    LayerCache& cache = fwd.layers[l];
    layer_norm(store_.param(ln1g(l)), store_.param(ln1b(l)), *x, ln_out,
               cache.ln1_xhat, cache.ln1_istd);
    cache.q.noalias() = ln_out * store_.param(layer_name(l, "wq"));
    cache.q.rowwise() += store_.param(layer_name(l, "bq")).row(0);
    cache.k.noalias() = ln_out * store_.param(layer_name(l, "wk"));
    cache.k.rowwise() += store_.param(layer_name(l, "bk")).row(0);
    cache.v.noalias() = ln_out * store_.param(layer_name(l, "wv"));
    cache.v.rowwise() += store_.param(layer_name(l, "bv")).row(0);

    cache.probs.setZero(std::size_t(B) * H * L, L);
    cache.ctx.setZero(std::size_t(B) * L, D);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        auto Q = cache.q.block(b * L, h * dh, L, dh);
        auto K = cache.k.block(b * L, h * dh, L, dh);
        auto V = cache.v.block(b * L, h * dh, L, dh);
        auto P = cache.probs.block((std::size_t(b) * H + h) * L, 0, L, L);
        MatrixX<Scalar> scores = (Q * K.transpose()) * scale;
        for (int i = 0; i < L; ++i) {
          Scalar mx = scores(i, 0);
          for (int j = 1; j <= i; ++j) mx = std::max(mx, scores(i, j));
          Scalar sum = 0;
          for (int j = 0; j <= i; ++j) {
            Scalar e = std::exp(scores(i, j) - mx);
            P(i, j) = e;
            sum += e;
          }
          Scalar inv = Scalar(1) / sum;
          for (int j = 0; j <= i; ++j) P(i, j) *= inv;
        }
        cache.ctx.block(b * L, h * dh, L, dh).noalias() = P * V;
      }
    }
    MatrixX<Scalar> attn_out;
    attn_out.noalias() = cache.ctx * store_.param(layer_name(l, "wo"));
    attn_out.rowwise() += store_.param(layer_name(l, "bo")).row(0);
    cache.x_attn = *x + attn_out;

    layer_norm(store_.param(ln2g(l)), store_.param(ln2b(l)), cache.x_attn,
               ln_out, cache.ln2_xhat, cache.ln2_istd);
    cache.h1.noalias() = ln_out * store_.param(layer_name(l, "w1"));
    cache.h1.rowwise() += store_.param(layer_name(l, "b1")).row(0);
    cache.act = cache.h1.unaryExpr([](Scalar v) { return gelu(v); });
    MatrixX<Scalar> mlp_out;
    mlp_out.noalias() = cache.act * store_.param(layer_name(l, "w2"));
    mlp_out.rowwise() += store_.param(layer_name(l, "b2")).row(0);
    fwd.x_final = cache.x_attn + mlp_out;  // becomes the next layer's input
    x = &fwd.x_final;
  }

  MatrixX<Scalar> lnf_out;
  layer_norm(store_.param("lnf_g"), store_.param("lnf_b"), fwd.x_final,
             lnf_out, fwd.lnf_xhat, fwd.lnf_istd);

  if (last_only) {
    fwd.head_in.resize(B, D);
    for (int b = 0; b < B; ++b) fwd.head_in.row(b) = lnf_out.row(b * L + L - 1);
  } else {
    fwd.head_in = std::move(lnf_out);
  }
  fwd.type_logits.noalias() = fwd.head_in * store_.param("type_w");
  fwd.type_logits.rowwise() += store_.param("type_b").row(0);
  fwd.bb_logits.noalias() = fwd.head_in * store_.param("bb_w");
  fwd.bb_logits.rowwise() += store_.param("bb_b").row(0);
  fwd.rxn_logits.noalias() = fwd.head_in * store_.param("rxn_w");
  fwd.rxn_logits.rowwise() += store_.param("rxn_b").row(0);
  return fwd;
}

template <typename Scalar>
struct HeadGrads {
  MatrixX<Scalar> dtype, dbb, drxn;
};

namespace {

template <typename Scalar>
typename Transformer<Scalar>::LossStats two_level_loss(
    const typename Transformer<Scalar>::Forwarded& fwd,
    const engine::FeaturizedBatch& batch, HeadGrads<Scalar>* grads) {
  if (fwd.last_only)
    throw InvariantError("loss needs full-position logits");
  typename Transformer<Scalar>::LossStats stats;
  const int L = fwd.seq;
  std::size_t masked = 0;
  for (int r = 0; r < batch.batch; ++r)
    for (int c = 0; c < batch.width; ++c)
      if (batch.mask[batch.index(r, c)] > 0) ++masked;
  stats.masked = masked;
  if (masked == 0) return stats;
  const Scalar inv_m = Scalar(1) / Scalar(masked);

  if (grads) {
    grads->dtype.setZero(fwd.type_logits.rows(), fwd.type_logits.cols());
    grads->dbb.setZero(fwd.bb_logits.rows(), fwd.bb_logits.cols());
    grads->drxn.setZero(fwd.rxn_logits.rows(), fwd.rxn_logits.cols());
  }

  double loss = 0.0;
  std::size_t type_correct = 0, token_correct = 0;
  std::vector<double> lp;
  for (int r = 0; r < batch.batch; ++r) {
    for (int c = 0; c < batch.width; ++c) {
      if (batch.mask[batch.index(r, c)] <= 0) continue;
      const int pos = r * L + (c + 1);  // position c+1 predicts cell c
      const auto target_type = batch.type_ids[batch.index(r, c)];
      const auto target_id = batch.token_ids[batch.index(r, c)];

      log_softmax_row<Scalar>(fwd.type_logits.row(pos), lp);
      int type_class = target_type == engine::kTypeBB    ? kTypeClassBB
                       : target_type == engine::kTypeRXN ? kTypeClassRXN
                                                         : kTypeClassEnd;
      loss -= lp[type_class];
      int argmax_type = 0;
      for (int i = 1; i < kTypeClassCount; ++i)
        if (lp[i] > lp[argmax_type]) argmax_type = i;
      bool type_ok = argmax_type == type_class;
      type_correct += type_ok;

      if (grads)
        for (int i = 0; i < kTypeClassCount; ++i)
          grads->dtype(pos, i) +=
              (Scalar(std::exp(lp[i])) - Scalar(i == type_class)) * inv_m;

      bool token_ok = type_ok;
      if (type_class == kTypeClassBB) {
        log_softmax_row<Scalar>(fwd.bb_logits.row(pos), lp);
        loss -= lp[target_id];
        int am = 0;
        for (std::size_t i = 1; i < lp.size(); ++i)
          if (lp[i] > lp[am]) am = static_cast<int>(i);
        token_ok = type_ok && am == target_id;
        if (grads)
          for (std::size_t i = 0; i < lp.size(); ++i)
            grads->dbb(pos, i) +=
                (Scalar(std::exp(lp[i])) -
                 Scalar(static_cast<int>(i) == target_id)) *
                inv_m;
      } else if (type_class == kTypeClassRXN) {
        log_softmax_row<Scalar>(fwd.rxn_logits.row(pos), lp);
        loss -= lp[target_id];
        int am = 0;
        for (std::size_t i = 1; i < lp.size(); ++i)
          if (lp[i] > lp[am]) am = static_cast<int>(i);
        token_ok = type_ok && am == target_id;
        if (grads)
          for (std::size_t i = 0; i < lp.size(); ++i)
            grads->drxn(pos, i) +=
                (Scalar(std::exp(lp[i])) -
                 Scalar(static_cast<int>(i) == target_id)) *
                inv_m;
      }
      token_correct += token_ok;
    }
  }
  stats.loss = loss / static_cast<double>(masked);
  stats.type_acc = static_cast<double>(type_correct) / masked;
  stats.token_acc = static_cast<double>(token_correct) / masked;
  return stats;
}

}  // namespace

template <typename Scalar>
typename Transformer<Scalar>::LossStats Transformer<Scalar>::backward(
    const Forwarded& fwd, const Input& in,
    const engine::FeaturizedBatch& batch) {
  const int D = cfg_.dim, H = cfg_.heads, dh = cfg_.head_dim();
  const int L = fwd.seq, B = fwd.batch;
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dh));

  HeadGrads<Scalar> hg;
  auto stats = two_level_loss<Scalar>(fwd, batch, &hg);
  if (stats.masked == 0) return stats;

  // head weights
  store_.grad("type_w").noalias() += fwd.head_in.transpose() * hg.dtype;
  store_.grad("type_b").row(0) += hg.dtype.colwise().sum();
  store_.grad("bb_w").noalias() += fwd.head_in.transpose() * hg.dbb;
  store_.grad("bb_b").row(0) += hg.dbb.colwise().sum();
  store_.grad("rxn_w").noalias() += fwd.head_in.transpose() * hg.drxn;
  store_.grad("rxn_b").row(0) += hg.drxn.colwise().sum();

  MatrixX<Scalar> dhead_in;
  dhead_in.noalias() = hg.dtype * store_.param("type_w").transpose();
  dhead_in.noalias() += hg.dbb * store_.param("bb_w").transpose();
  dhead_in.noalias() += hg.drxn * store_.param("rxn_w").transpose();

  MatrixX<Scalar> dx;
  layer_norm_backward(std::as_const(store_).param("lnf_g"), fwd.lnf_xhat,
                      fwd.lnf_istd,
                      dhead_in, store_.grad("lnf_g"), store_.grad("lnf_b"),
                      dx);

  MatrixX<Scalar> ln_out, dln_out, d_attn_in, dq, dk, dv, dctx;
  for (int l = cfg_.layers - 1; l >= 0; --l) {
    const LayerCache& cache = fwd.layers[l];
    // --- MLP path ---
    // reconstruct ln2 output
    ln_out.noalias() = cache.ln2_xhat * store_.param(ln2g(l)).row(0).asDiagonal();
    ln_out.rowwise() += store_.param(ln2b(l)).row(0);

    MatrixX<Scalar> dact;
    dact.noalias() = dx * store_.param(layer_name(l, "w2")).transpose();
    store_.grad(layer_name(l, "w2")).noalias() +=
        cache.act.transpose() * dx;
    store_.grad(layer_name(l, "b2")).row(0) += dx.colwise().sum();
    MatrixX<Scalar> dh1 =
        dact.binaryExpr(cache.h1, [](Scalar g, Scalar x) {
          return g * gelu_grad(x);
        });
    store_.grad(layer_name(l, "w1")).noalias() +=
        ln_out.transpose() * dh1;
    store_.grad(layer_name(l, "b1")).row(0) += dh1.colwise().sum();
    dln_out.noalias() = dh1 * store_.param(layer_name(l, "w1")).transpose();

    MatrixX<Scalar> dx_attn;
    layer_norm_backward(std::as_const(store_).param(ln2g(l)), cache.ln2_xhat,
                        cache.ln2_istd,
                        dln_out, store_.grad(ln2g(l)), store_.grad(ln2b(l)),
                        dx_attn);
    dx_attn += dx;  // residual

    // --- attention path ---
    dctx.noalias() = dx_attn * store_.param(layer_name(l, "wo")).transpose();
    store_.grad(layer_name(l, "wo")).noalias() +=
        cache.ctx.transpose() * dx_attn;
    store_.grad(layer_name(l, "bo")).row(0) += dx_attn.colwise().sum();

    dq.setZero(std::size_t(B) * L, D);
    dk.setZero(std::size_t(B) * L, D);
    dv.setZero(std::size_t(B) * L, D);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        auto Q = cache.q.block(b * L, h * dh, L, dh);
        auto K = cache.k.block(b * L, h * dh, L, dh);
        auto V = cache.v.block(b * L, h * dh, L, dh);
        auto P = cache.probs.block((std::size_t(b) * H + h) * L, 0, L, L);
        auto dC = dctx.block(b * L, h * dh, L, dh);
        MatrixX<Scalar> dP = dC * V.transpose();
        dv.block(b * L, h * dh, L, dh).noalias() += P.transpose() * dC;
        // softmax backward, causal rows
        MatrixX<Scalar> dS(L, L);
        dS.setZero();
        for (int i = 0; i < L; ++i) {
          Scalar dot = 0;
          for (int j = 0; j <= i; ++j) dot += dP(i, j) * P(i, j);
          for (int j = 0; j <= i; ++j)
            dS(i, j) = P(i, j) * (dP(i, j) - dot);
        }
        dq.block(b * L, h * dh, L, dh).noalias() += dS * K * scale;
        dk.block(b * L, h * dh, L, dh).noalias() +=
            dS.transpose() * Q * scale;
      }
    }

    // reconstruct ln1 output
    ln_out.noalias() = cache.ln1_xhat * store_.param(ln1g(l)).row(0).asDiagonal();
    ln_out.rowwise() += store_.param(ln1b(l)).row(0);

    store_.grad(layer_name(l, "wq")).noalias() += ln_out.transpose() * dq;
    store_.grad(layer_name(l, "bq")).row(0) += dq.colwise().sum();
    store_.grad(layer_name(l, "wk")).noalias() += ln_out.transpose() * dk;
    store_.grad(layer_name(l, "bk")).row(0) += dk.colwise().sum();
    store_.grad(layer_name(l, "wv")).noalias() += ln_out.transpose() * dv;
    store_.grad(layer_name(l, "bv")).row(0) += dv.colwise().sum();

    dln_out.noalias() = dq * store_.param(layer_name(l, "wq")).transpose();
    dln_out.noalias() += dk * store_.param(layer_name(l, "wk")).transpose();
    dln_out.noalias() += dv * store_.param(layer_name(l, "wv")).transpose();

    layer_norm_backward(std::as_const(store_).param(ln1g(l)), cache.ln1_xhat,
                        cache.ln1_istd,
                        dln_out, store_.grad(ln1g(l)), store_.grad(ln1b(l)),
                        d_attn_in);
    dx = d_attn_in + dx_attn;  // residual into the layer input
  }

  // --- embedding scatter ---
  auto d_bb = store_.grad("bb_embed");
  auto d_rxn = store_.grad("rxn_embed");
  auto d_start = store_.grad("start_embed");
  auto d_type_embed = store_.grad("prompt_type_embed");
  auto d_pos = store_.grad("pos_embed");
  auto d_fp_struct = store_.grad("fp_struct_proj");
  auto d_fp_pharm = store_.grad("fp_pharm_proj");
  auto d_frag = store_.grad("frag_proj");
  auto d_substruct = store_.grad("substruct_proj");
  auto d_desc = store_.grad("desc_proj");

  for (int b = 0; b < B; ++b) {
    const int base = b * L;
    auto d_prompt = dx.row(base);
    auto pt = static_cast<props::PropertyType>(in.prompt_types[b]);
    switch (pt) {
      case props::PropertyType::FpStruct:
      case props::PropertyType::FpPharm: {
        const float* payload = in.fp_payload + std::size_t(b) * cfg_.fp_bits;
        auto& dproj =
            pt == props::PropertyType::FpStruct ? d_fp_struct : d_fp_pharm;
        for (int i = 0; i < cfg_.fp_bits; ++i)
          if (payload[i] != 0.0f)
            dproj.row(i) += Scalar(payload[i]) * d_prompt;
        break;
      }
      case props::PropertyType::Fragments:
      case props::PropertyType::Substruct: {
        const float* payload =
            in.frag_payload + std::size_t(b) * cfg_.frag_table;
        auto& dproj =
            pt == props::PropertyType::Fragments ? d_frag : d_substruct;
        for (int i = 0; i < cfg_.frag_table; ++i)
          if (payload[i] != 0.0f)
            dproj.row(i) += Scalar(payload[i]) * d_prompt;
        break;
      }
      case props::PropertyType::Descriptors: {
        const float* payload =
            in.desc_payload + std::size_t(b) * props::kDescriptorCount;
        for (int i = 0; i < props::kDescriptorCount; ++i)
          d_desc.row(i) += Scalar(payload[i]) * d_prompt;
        break;
      }
    }
    d_type_embed.row(static_cast<int>(pt)) += d_prompt;
    d_pos.row(0) += d_prompt;
    d_start.row(0) += dx.row(base + 1);
    d_pos.row(1) += dx.row(base + 1);
    for (int c = 0; c < in.token_width; ++c) {
      auto t = in.type_ids[in.index(b, c)];
      auto row = dx.row(base + 2 + c);
      if (t == engine::kTypeBB)
        d_bb.row(in.token_ids[in.index(b, c)]) += row;
      else if (t == engine::kTypeRXN)
        d_rxn.row(in.token_ids[in.index(b, c)]) += row;
      d_pos.row(2 + c) += row;
    }
  }
  return stats;
}

template <typename Scalar>
typename Transformer<Scalar>::LossStats Transformer<Scalar>::loss(
    const Forwarded& fwd, const engine::FeaturizedBatch& batch) const {
  return two_level_loss<Scalar>(fwd, batch, nullptr);
}

template <typename Scalar>
std::vector<double> Transformer<Scalar>::full_logprobs(const Forwarded& fwd,
                                                       int row) const {
  std::vector<double> lt, lb, lr;
  log_softmax_row<Scalar>(fwd.type_logits.row(row), lt);
  log_softmax_row<Scalar>(fwd.bb_logits.row(row), lb);
  log_softmax_row<Scalar>(fwd.rxn_logits.row(row), lr);
  std::vector<double> out(cfg_.n_bb + cfg_.n_rxn + 1);
  for (int i = 0; i < cfg_.n_bb; ++i) out[i] = lt[kTypeClassBB] + lb[i];
  for (int j = 0; j < cfg_.n_rxn; ++j)
    out[cfg_.n_bb + j] = lt[kTypeClassRXN] + lr[j];
  out[cfg_.n_bb + cfg_.n_rxn] = lt[kTypeClassEnd];
  return out;
}

template class Transformer<float>;
template class Transformer<double>;

}  // namespace prexsyn::model
