// tasr/transformer.hpp

// Copyright 2026  The tasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TASR_TRANSFORMER_HPP
#define TASR_TRANSFORMER_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "tasr/config.hpp"
#include "tasr/common.hpp"
#include "tasr/graph.hpp"

namespace tasr {

enum class InputKind { filterbank, token };

inline std::string input_kind_name(InputKind k) {
  return k == InputKind::filterbank ? "filterbank" : "token";
}

inline InputKind input_kind_from_name(const std::string& s) {
  if (s == "filterbank") return InputKind::filterbank;
  if (s == "token") return InputKind::token;
  throw Error("unknown input kind '" + s + "'");
}

// Encoder-decoder architecture description. d_k/d_v default to d_model/h
// when left at zero.
struct ModelConfig {
  int num_layers = 6;  // encoder and decoder stack depth
  int d_model = 512;
  int num_heads = 8;
  int d_k = 0;
  int d_v = 0;
  int d_ff = 0;  // defaults to 4 * d_model
  double dropout_rate = 0.1;
  InputKind input_kind = InputKind::filterbank;
  int input_dim = 320;  // feature width for filterbank input
  int src_vocab = 0;    // source vocabulary for token input
  int tgt_vocab = 0;

  void finalize() {
    if (d_k == 0 && num_heads > 0) d_k = d_model / num_heads;
    if (d_v == 0 && num_heads > 0) d_v = d_model / num_heads;
    if (d_ff == 0) d_ff = 4 * d_model;
  }

  void validate() const {
    TASR_REQUIRE(num_layers > 0, "num_layers must be positive");
    TASR_REQUIRE(d_model > 0 && d_model % 2 == 0, "d_model must be positive and even");
    TASR_REQUIRE(num_heads > 0, "num_heads must be positive");
    TASR_REQUIRE(d_k > 0 && d_v > 0, "d_k and d_v must be positive");
    TASR_REQUIRE(d_ff > 0, "d_ff must be positive");
    TASR_REQUIRE(dropout_rate >= 0.0 && dropout_rate < 1.0, "dropout rate must be in [0,1)");
    TASR_REQUIRE(tgt_vocab > 0, "target vocabulary size must be set");
    if (input_kind == InputKind::filterbank)
      TASR_REQUIRE(input_dim > 0, "input_dim must be set for filterbank input");
    else
      TASR_REQUIRE(src_vocab > 0, "src_vocab must be set for token input");
  }

  KeyValueConfig to_config() const {
    KeyValueConfig kv;
    kv.set("N", std::to_string(num_layers));
    kv.set("d_model", std::to_string(d_model));
    kv.set("h", std::to_string(num_heads));
    kv.set("d_k", std::to_string(d_k));
    kv.set("d_v", std::to_string(d_v));
    kv.set("d_ff", std::to_string(d_ff));
    kv.set("dropout_rate", std::to_string(dropout_rate));
    kv.set("input_kind", input_kind_name(input_kind));
    kv.set("input_dim", std::to_string(input_dim));
    kv.set("src_vocab", std::to_string(src_vocab));
    kv.set("tgt_vocab", std::to_string(tgt_vocab));
    return kv;
  }

  static ModelConfig from_config(const KeyValueConfig& kv) {
    ModelConfig cfg;
    cfg.num_layers = kv.get_int("N", cfg.num_layers);
    cfg.d_model = kv.get_int("d_model", cfg.d_model);
    cfg.num_heads = kv.get_int("h", cfg.num_heads);
    cfg.d_k = kv.get_int("d_k", 0);
    cfg.d_v = kv.get_int("d_v", 0);
    cfg.d_ff = kv.get_int("d_ff", 0);
    cfg.dropout_rate = kv.get_double("dropout_rate", cfg.dropout_rate);
    cfg.input_kind = input_kind_from_name(kv.get_string("input_kind", "filterbank"));
    cfg.input_dim = kv.get_int("input_dim", cfg.input_dim);
    cfg.src_vocab = kv.get_int("src_vocab", 0);
    cfg.tgt_vocab = kv.get_int("tgt_vocab", 0);
    cfg.finalize();
    return cfg;
  }
};

struct TensorShape {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

// The complete parameter list, in the fixed order used by checkpoints.
inline std::vector<TensorShape> parameter_shapes(const ModelConfig& cfg) {
  std::vector<TensorShape> shapes;
  const Eigen::Index d = cfg.d_model;
  const Eigen::Index hk = static_cast<Eigen::Index>(cfg.num_heads) * cfg.d_k;
  const Eigen::Index hv = static_cast<Eigen::Index>(cfg.num_heads) * cfg.d_v;

  auto attention = [&](const std::string& prefix) {
    shapes.push_back({prefix + ".Wq", d, hk});
    shapes.push_back({prefix + ".bq", 1, hk});
    shapes.push_back({prefix + ".Wk", d, hk});
    shapes.push_back({prefix + ".bk", 1, hk});
    shapes.push_back({prefix + ".Wv", d, hv});
    shapes.push_back({prefix + ".bv", 1, hv});
    shapes.push_back({prefix + ".Wo", hv, d});
    shapes.push_back({prefix + ".bo", 1, d});
  };
  auto norm = [&](const std::string& prefix) {
    shapes.push_back({prefix + ".gain", 1, d});
    shapes.push_back({prefix + ".bias", 1, d});
  };
  auto ffn = [&](const std::string& prefix) {
    shapes.push_back({prefix + ".W1", d, cfg.d_ff});
    shapes.push_back({prefix + ".b1", 1, cfg.d_ff});
    shapes.push_back({prefix + ".W2", cfg.d_ff, d});
    shapes.push_back({prefix + ".b2", 1, d});
  };

  if (cfg.input_kind == InputKind::filterbank) {
    shapes.push_back({"frontend.linear.W", cfg.input_dim, d});
    shapes.push_back({"frontend.linear.b", 1, d});
    norm("frontend.ln");
  } else {
    shapes.push_back({"encoder.embed.W", cfg.src_vocab, d});
  }
  for (int i = 0; i < cfg.num_layers; ++i) {
    const std::string p = "encoder.layer" + std::to_string(i);
    attention(p + ".self");
    norm(p + ".ln1");
    ffn(p + ".ffn");
    norm(p + ".ln2");
  }
  shapes.push_back({"decoder.embed.W", cfg.tgt_vocab, d});
  for (int i = 0; i < cfg.num_layers; ++i) {
    const std::string p = "decoder.layer" + std::to_string(i);
    attention(p + ".self");
    norm(p + ".ln1");
    attention(p + ".cross");
    norm(p + ".ln2");
    ffn(p + ".ffn");
    norm(p + ".ln3");
  }
  shapes.push_back({"output.W", d, cfg.tgt_vocab});
  shapes.push_back({"output.b", 1, cfg.tgt_vocab});
  return shapes;
}

inline int64_t count_parameters(const ModelConfig& cfg) {
  int64_t total = 0;
  for (const TensorShape& s : parameter_shapes(cfg))
    total += static_cast<int64_t>(s.rows) * s.cols;
  return total;
}

// Named dense tensors with matching gradient buffers.
template <typename Scalar>
class ParameterStore {
 public:
  struct Tensor {
    std::string name;
    MatrixX<Scalar> value;
    MatrixX<Scalar> grad;
  };

  static ParameterStore build(const ModelConfig& cfg) {
    ParameterStore store;
    for (const TensorShape& s : parameter_shapes(cfg)) {
      Tensor t;
      t.name = s.name;
      t.value = MatrixX<Scalar>::Zero(s.rows, s.cols);
      t.grad = MatrixX<Scalar>::Zero(s.rows, s.cols);
      store.index_[t.name] = store.tensors_.size();
      store.tensors_.push_back(std::move(t));
    }
    return store;
  }

  // Glorot-uniform weights, zero biases, unit layer-norm gains.
  void init(uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (Tensor& t : tensors_) {
      if (ends_with(t.name, ".gain")) {
        t.value.setOnes();
        continue;
      }
      if (t.value.rows() == 1) {
        t.value.setZero();  // biases
        continue;
      }
      const double limit =
          std::sqrt(6.0 / static_cast<double>(t.value.rows() + t.value.cols()));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (Eigen::Index r = 0; r < t.value.rows(); ++r)
        for (Eigen::Index c = 0; c < t.value.cols(); ++c)
          t.value(r, c) = static_cast<Scalar>(dist(rng));
    }
  }

  Tensor& at(const std::string& name) {
    auto it = index_.find(name);
    TASR_REQUIRE(it != index_.end(), "unknown parameter '" + name + "'");
    return tensors_[it->second];
  }
  const Tensor& at(const std::string& name) const {
    auto it = index_.find(name);
    TASR_REQUIRE(it != index_.end(), "unknown parameter '" + name + "'");
    return tensors_[it->second];
  }

  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  int64_t parameter_count() const {
    int64_t total = 0;
    for (const Tensor& t : tensors_) total += t.value.size();
    return total;
  }

  void zero_grads() {
    for (Tensor& t : tensors_) t.grad.setZero();
  }

 private:
  static bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  }

  std::vector<Tensor> tensors_;
  std::unordered_map<std::string, size_t> index_;
};

// Interleaved sinusoids: column 2i is sin(pos / 10000^(2i/d)), column 2i+1
// the matching cosine.
template <typename Scalar>
MatrixX<Scalar> positional_encoding(int max_len, int d_model) {
  TASR_REQUIRE(max_len > 0 && d_model > 0 && d_model % 2 == 0,
               "positional encoding needs positive length and even width");
  MatrixX<Scalar> pe(max_len, d_model);
  for (int pos = 0; pos < max_len; ++pos) {
    for (int i = 0; i < d_model / 2; ++i) {
      const double angle =
          pos / std::pow(10000.0, (2.0 * i) / static_cast<double>(d_model));
      pe(pos, 2 * i) = static_cast<Scalar>(std::sin(angle));
      pe(pos, 2 * i + 1) = static_cast<Scalar>(std::cos(angle));
    }
  }
  return pe;
}

// Additive attention-mask biases: 0 keeps a position, -1e9 drives its
// softmax weight to exactly zero after exponentiation.
template <typename Scalar>
MatrixX<Scalar> causal_mask_bias(Eigen::Index n) {
  MatrixX<Scalar> bias = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = r + 1; c < n; ++c) bias(r, c) = Scalar(-1e9);
  return bias;
}

template <typename Scalar>
MatrixX<Scalar> padding_mask_bias(Eigen::Index rows, Eigen::Index total_cols,
                                  Eigen::Index valid_cols) {
  TASR_REQUIRE(valid_cols >= 1 && valid_cols <= total_cols,
               "valid length out of range");
  MatrixX<Scalar> bias = MatrixX<Scalar>::Zero(rows, total_cols);
  bias.rightCols(total_cols - valid_cols).setConstant(Scalar(-1e9));
  return bias;
}

// Reference attention on plain matrices: softmax(Q K^T / sqrt(d_k) + bias) V.
template <typename Scalar>
MatrixX<Scalar> scaled_dot_attention(const MatrixX<Scalar>& q,
                                     const MatrixX<Scalar>& k,
                                     const MatrixX<Scalar>& v,
                                     const MatrixX<Scalar>* mask_bias = nullptr) {
  TASR_REQUIRE(q.cols() == k.cols(), "query/key width mismatch");
  TASR_REQUIRE(k.rows() == v.rows(), "key/value length mismatch");
  MatrixX<Scalar> scores =
      (q * k.transpose()) / std::sqrt(static_cast<Scalar>(q.cols()));
  if (mask_bias) {
    TASR_REQUIRE(mask_bias->rows() == scores.rows() &&
                     mask_bias->cols() == scores.cols(),
                 "mask shape mismatch");
    scores += *mask_bias;
  }
  MatrixX<Scalar> out(scores.rows(), v.cols());
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const Scalar mx = scores.row(r).maxCoeff();
    RowVectorX<Scalar> e = (scores.row(r).array() - mx).exp();
    out.row(r) = (e / e.sum()) * v;
  }
  return out;
}

// One utterance on the encoder side: either a feature matrix or token ids.
template <typename Scalar>
struct EncoderInput {
  MatrixX<Scalar> features;
  std::vector<int> tokens;

  Eigen::Index length(InputKind kind) const {
    return kind == InputKind::filterbank
               ? features.rows()
               : static_cast<Eigen::Index>(tokens.size());
  }
};

// Post-norm encoder-decoder stack. Methods build onto a caller-owned Graph;
// gradients land in the parameter store after Graph::backward().
template <typename Scalar>
class Model {
 public:
  using GExpr = typename Graph<Scalar>::Expr;

  explicit Model(ModelConfig cfg)
      : cfg_(cfg), params_(ParameterStore<Scalar>::build(cfg)) {
    cfg_.validate();
  }

  const ModelConfig& config() const { return cfg_; }
  ParameterStore<Scalar>& params() { return params_; }
  const ParameterStore<Scalar>& params() const { return params_; }

  void init(uint64_t seed) { params_.init(seed); }

  // Encoder states, one row per input position. valid_len < 0 means the
  // whole input is real; shorter values mask the tail from attention.
  GExpr encode(Graph<Scalar>& g, const EncoderInput<Scalar>& in,
               Eigen::Index valid_len = -1, bool training = false) {
    const Eigen::Index t = in.length(cfg_.input_kind);
    TASR_REQUIRE(t > 0, "empty encoder input");
    if (valid_len < 0) valid_len = t;
    const double rate = training ? cfg_.dropout_rate : 0.0;

    GExpr x;
    if (cfg_.input_kind == InputKind::filterbank) {
      TASR_REQUIRE(in.features.cols() == cfg_.input_dim, "feature width mismatch");
      GExpr feats = g.constant(in.features);
      GExpr lin = g.add_rowvec(g.matmul(feats, p(g, "frontend.linear.W")),
                               p(g, "frontend.linear.b"));
      x = g.layer_norm(lin, p(g, "frontend.ln.gain"), p(g, "frontend.ln.bias"));
    } else {
      x = g.scale(g.embedding(p(g, "encoder.embed.W"), in.tokens),
                  std::sqrt(static_cast<Scalar>(cfg_.d_model)));
    }
    x = g.add_constant(x, positional_encoding<Scalar>(static_cast<int>(t), cfg_.d_model));
    x = g.dropout(x, rate);

    MatrixX<Scalar> pad_bias;
    const MatrixX<Scalar>* mask = nullptr;
    if (valid_len < t) {
      pad_bias = padding_mask_bias<Scalar>(t, t, valid_len);
      mask = &pad_bias;
    }
    for (int i = 0; i < cfg_.num_layers; ++i) {
      const std::string pfx = "encoder.layer" + std::to_string(i);
      GExpr attn = attention(g, pfx + ".self", x, x, mask, rate);
      x = residual_norm(g, pfx + ".ln1", x, attn, rate);
      GExpr ff = feed_forward(g, pfx + ".ffn", x);
      x = residual_norm(g, pfx + ".ln2", x, ff, rate);
    }
    return x;
  }

  // Next-token logits for every position of the prefix (prefix begins with
  // the start-of-sequence id). Rows: prefix length; cols: tgt_vocab.
  GExpr decode_logits(Graph<Scalar>& g, GExpr encoder_states,
                      Eigen::Index enc_valid_len,
                      const std::vector<int>& prefix, bool training = false) {
    const Eigen::Index m = static_cast<Eigen::Index>(prefix.size());
    TASR_REQUIRE(m > 0, "empty decoder prefix");
    const Eigen::Index enc_len = g.value(encoder_states).rows();
    if (enc_valid_len < 0) enc_valid_len = enc_len;
    const double rate = training ? cfg_.dropout_rate : 0.0;

    GExpr x = g.scale(g.embedding(p(g, "decoder.embed.W"), prefix),
                      std::sqrt(static_cast<Scalar>(cfg_.d_model)));
    x = g.add_constant(x, positional_encoding<Scalar>(static_cast<int>(m), cfg_.d_model));
    x = g.dropout(x, rate);

    const MatrixX<Scalar> causal = causal_mask_bias<Scalar>(m);
    MatrixX<Scalar> cross_bias;
    const MatrixX<Scalar>* cross_mask = nullptr;
    if (enc_valid_len < enc_len) {
      cross_bias = padding_mask_bias<Scalar>(m, enc_len, enc_valid_len);
      cross_mask = &cross_bias;
    }
    for (int i = 0; i < cfg_.num_layers; ++i) {
      const std::string pfx = "decoder.layer" + std::to_string(i);
      GExpr self = attention(g, pfx + ".self", x, x, &causal, rate);
      x = residual_norm(g, pfx + ".ln1", x, self, rate);
      GExpr cross = attention(g, pfx + ".cross", x, encoder_states, cross_mask, rate);
      x = residual_norm(g, pfx + ".ln2", x, cross, rate);
      GExpr ff = feed_forward(g, pfx + ".ffn", x);
      x = residual_norm(g, pfx + ".ln3", x, ff, rate);
    }
    return g.add_rowvec(g.matmul(x, p(g, "output.W")), p(g, "output.b"));
  }

 private:
  GExpr p(Graph<Scalar>& g, const std::string& name) {
    auto& t = params_.at(name);
    return g.parameter(&t.value, &t.grad);
  }

  GExpr attention(Graph<Scalar>& g, const std::string& pfx, GExpr queries,
                  GExpr keys_values, const MatrixX<Scalar>* mask_bias,
                  double /*rate*/) {
    GExpr q = g.add_rowvec(g.matmul(queries, p(g, pfx + ".Wq")), p(g, pfx + ".bq"));
    GExpr k = g.add_rowvec(g.matmul(keys_values, p(g, pfx + ".Wk")), p(g, pfx + ".bk"));
    GExpr v = g.add_rowvec(g.matmul(keys_values, p(g, pfx + ".Wv")), p(g, pfx + ".bv"));

    std::vector<GExpr> heads;
    heads.reserve(cfg_.num_heads);
    const Scalar inv_sqrt_dk = Scalar(1) / std::sqrt(static_cast<Scalar>(cfg_.d_k));
    for (int h = 0; h < cfg_.num_heads; ++h) {
      GExpr qh = g.slice_cols(q, static_cast<Eigen::Index>(h) * cfg_.d_k, cfg_.d_k);
      GExpr kh = g.slice_cols(k, static_cast<Eigen::Index>(h) * cfg_.d_k, cfg_.d_k);
      GExpr vh = g.slice_cols(v, static_cast<Eigen::Index>(h) * cfg_.d_v, cfg_.d_v);
      GExpr scores = g.scale(g.matmul_nt(qh, kh), inv_sqrt_dk);
      if (mask_bias) scores = g.add_constant(scores, *mask_bias);
      heads.push_back(g.matmul(g.softmax_rows(scores), vh));
    }
    GExpr concat = cfg_.num_heads == 1 ? heads[0] : g.hconcat(heads);
    return g.add_rowvec(g.matmul(concat, p(g, pfx + ".Wo")), p(g, pfx + ".bo"));
  }

  GExpr feed_forward(Graph<Scalar>& g, const std::string& pfx, GExpr x) {
    GExpr hidden =
        g.relu(g.add_rowvec(g.matmul(x, p(g, pfx + ".W1")), p(g, pfx + ".b1")));
    return g.add_rowvec(g.matmul(hidden, p(g, pfx + ".W2")), p(g, pfx + ".b2"));
  }

  // Post-norm residual: LayerNorm(x + Dropout(sublayer(x))).
  GExpr residual_norm(Graph<Scalar>& g, const std::string& pfx, GExpr x,
                      GExpr sublayer, double rate) {
    return g.layer_norm(g.add(x, g.dropout(sublayer, rate)),
                        p(g, pfx + ".gain"), p(g, pfx + ".bias"));
  }

  ModelConfig cfg_;
  ParameterStore<Scalar> params_;
};

}  // namespace tasr

#endif  // TASR_TRANSFORMER_HPP
