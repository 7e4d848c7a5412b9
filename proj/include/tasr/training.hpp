// tasr/training.hpp

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

#ifndef TASR_TRAINING_HPP
#define TASR_TRAINING_HPP

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tasr/checkpoint.hpp"
#include "tasr/common.hpp"
#include "tasr/graph.hpp"
#include "tasr/transformer.hpp"

namespace tasr {

struct TrainConfig {
  int warmup_steps = 4000;
  double label_smoothing = 0.1;
  double clip_norm = 5.0;      // global L2 clip; <= 0 disables
  int64_t batch_frames = 600;  // encoder positions per batch
  int max_epochs = 10;
  int checkpoint_every = 0;  // steps between checkpoints; 0 = each epoch end
  int average_last = 20;     // checkpoints averaged into the final model
  uint64_t seed = 1;

  void validate() const {
    TASR_REQUIRE(warmup_steps >= 1, "warmup_steps must be >= 1");
    TASR_REQUIRE(label_smoothing >= 0.0 && label_smoothing < 1.0,
                 "label_smoothing must be in [0,1)");
    TASR_REQUIRE(batch_frames >= 1, "batch_frames must be >= 1");
    TASR_REQUIRE(max_epochs >= 1, "max_epochs must be >= 1");
    TASR_REQUIRE(checkpoint_every >= 0, "checkpoint_every must be >= 0");
    TASR_REQUIRE(average_last >= 1, "average_last must be >= 1");
  }

  KeyValueConfig to_config() const {
    KeyValueConfig kv;
    kv.set("warmup_steps", std::to_string(warmup_steps));
    kv.set("label_smoothing", std::to_string(label_smoothing));
    kv.set("clip_norm", std::to_string(clip_norm));
    kv.set("batch_frames", std::to_string(batch_frames));
    kv.set("max_epochs", std::to_string(max_epochs));
    kv.set("checkpoint_every", std::to_string(checkpoint_every));
    kv.set("average_last", std::to_string(average_last));
    kv.set("seed", std::to_string(seed));
    return kv;
  }

  static TrainConfig from_config(const KeyValueConfig& kv) {
    TrainConfig cfg;
    cfg.warmup_steps = kv.get_int("warmup_steps", cfg.warmup_steps);
    cfg.label_smoothing = kv.get_double("label_smoothing", cfg.label_smoothing);
    cfg.clip_norm = kv.get_double("clip_norm", cfg.clip_norm);
    cfg.batch_frames = kv.get_int("batch_frames", static_cast<int>(cfg.batch_frames));
    cfg.max_epochs = kv.get_int("max_epochs", cfg.max_epochs);
    cfg.checkpoint_every = kv.get_int("checkpoint_every", cfg.checkpoint_every);
    cfg.average_last = kv.get_int("average_last", cfg.average_last);
    cfg.seed = static_cast<uint64_t>(kv.get_int("seed", static_cast<int>(cfg.seed)));
    return cfg;
  }
};

// Inverse-square-root schedule with linear warmup:
// d_model^-0.5 * min(step^-0.5, step * warmup^-1.5).
inline double lr_schedule(int64_t step, int d_model, int warmup_steps) {
  TASR_REQUIRE(step >= 1, "schedule step counts from 1");
  TASR_REQUIRE(d_model >= 1 && warmup_steps >= 1, "bad schedule constants");
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(warmup_steps);
  return std::pow(static_cast<double>(d_model), -0.5) *
         std::min(std::pow(s, -0.5), s * std::pow(w, -1.5));
}

template <typename Scalar>
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  int64_t step = 0;
  std::vector<MatrixX<Scalar>> m;
  std::vector<MatrixX<Scalar>> v;

  static AdamState init(const ParameterStore<Scalar>& store) {
    AdamState s;
    s.m.reserve(store.tensors().size());
    s.v.reserve(store.tensors().size());
    for (const auto& t : store.tensors()) {
      s.m.push_back(MatrixX<Scalar>::Zero(t.value.rows(), t.value.cols()));
      s.v.push_back(MatrixX<Scalar>::Zero(t.value.rows(), t.value.cols()));
    }
    return s;
  }
};

template <typename Scalar>
double global_grad_norm(const ParameterStore<Scalar>& store) {
  double sq = 0.0;
  for (const auto& t : store.tensors())
    sq += t.grad.template cast<double>().squaredNorm();
  return std::sqrt(sq);
}

// Clips the global gradient norm, then applies one bias-corrected Adam
// update. Returns the pre-clip norm; refuses non-finite gradients.
template <typename Scalar>
double clip_and_step(ParameterStore<Scalar>& store, AdamState<Scalar>& adam,
                     double lr, double clip_norm) {
  TASR_REQUIRE(adam.m.size() == store.tensors().size(),
               "optimizer state does not match the parameter store");
  const double norm = global_grad_norm(store);
  TASR_REQUIRE(std::isfinite(norm), "non-finite gradient norm");
  const double rescale =
      (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

  adam.step += 1;
  const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
  const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
  for (size_t i = 0; i < store.tensors().size(); ++i) {
    auto& t = store.tensors()[i];
    const MatrixX<Scalar> g = t.grad * static_cast<Scalar>(rescale);
    adam.m[i] = static_cast<Scalar>(adam.beta1) * adam.m[i] +
                static_cast<Scalar>(1.0 - adam.beta1) * g;
    adam.v[i] = (static_cast<Scalar>(adam.beta2) * adam.v[i].array() +
                 static_cast<Scalar>(1.0 - adam.beta2) * g.array().square())
                    .matrix();
    const auto m_hat = adam.m[i].array() / static_cast<Scalar>(bc1);
    const auto v_hat = adam.v[i].array() / static_cast<Scalar>(bc2);
    t.value.array() -=
        static_cast<Scalar>(lr) * m_hat / (v_hat.sqrt() + static_cast<Scalar>(adam.eps));
  }
  return norm;
}

// One supervised pair: encoder input plus the target unit ids (no
// start/end markers; those are added by teacher forcing).
template <typename Scalar>
struct TrainExample {
  std::string id;
  EncoderInput<Scalar> input;
  std::vector<int> targets;
};

// Greedy packing in the given order: batches absorb examples until the
// frame budget is hit; an oversized example still travels alone.
template <typename Scalar>
std::vector<std::vector<size_t>> pack_batches(
    const std::vector<TrainExample<Scalar>>& examples,
    const std::vector<size_t>& order, int64_t batch_frames, InputKind kind) {
  std::vector<std::vector<size_t>> batches;
  std::vector<size_t> current;
  int64_t used = 0;
  for (size_t idx : order) {
    const int64_t frames = examples[idx].input.length(kind);
    if (!current.empty() && used + frames > batch_frames) {
      batches.push_back(std::move(current));
      current.clear();
      used = 0;
    }
    current.push_back(idx);
    used += frames;
  }
  if (!current.empty()) batches.push_back(std::move(current));
  return batches;
}

// Teacher-forced loss/gradient for one example; the backward seed weights
// the example by its share of the batch's target tokens, so accumulated
// gradients equal the token-weighted batch mean. Returns the summed
// (unnormalized) cross-entropy and the token count.
template <typename Scalar>
std::pair<double, int> accumulate_example(Model<Scalar>& model,
                                          const TrainExample<Scalar>& ex,
                                          double label_smoothing,
                                          int batch_tokens, bool training,
                                          std::mt19937_64* rng) {
  TASR_REQUIRE(!ex.targets.empty(), "example '" + ex.id + "' has no targets");
  Graph<Scalar> g;
  if (training) g.set_rng(rng);
  auto enc = model.encode(g, ex.input, -1, training);

  std::vector<int> prefix;
  prefix.reserve(ex.targets.size() + 1);
  prefix.push_back(kBosId);
  prefix.insert(prefix.end(), ex.targets.begin(), ex.targets.end());
  std::vector<int> labels(ex.targets);
  labels.push_back(kEosId);

  auto logits = model.decode_logits(g, enc, -1, prefix, training);
  int n_tokens = 0;
  auto loss = g.smoothed_cross_entropy(logits, labels,
                                       static_cast<Scalar>(label_smoothing),
                                       kPadId, &n_tokens);
  if (training && batch_tokens > 0)
    g.backward(loss, static_cast<Scalar>(n_tokens) /
                         static_cast<Scalar>(batch_tokens));
  return {static_cast<double>(g.value(loss)(0, 0)) * n_tokens, n_tokens};
}

// Token-weighted mean loss over a whole set, without touching gradients.
template <typename Scalar>
double evaluate_loss(Model<Scalar>& model,
                     const std::vector<TrainExample<Scalar>>& examples,
                     double label_smoothing) {
  TASR_REQUIRE(!examples.empty(), "nothing to evaluate");
  double total = 0.0;
  int64_t tokens = 0;
  for (const auto& ex : examples) {
    auto [sum, n] = accumulate_example(model, ex, label_smoothing, 0, false, nullptr);
    total += sum;
    tokens += n;
  }
  return total / static_cast<double>(tokens);
}

template <typename Scalar>
struct TrainResult {
  std::vector<std::string> checkpoint_paths;
  int64_t steps = 0;
  double final_epoch_loss = 0.0;
};

// Epoch loop: seeded shuffle, frame-budget batches, gradient accumulation
// across the batch, clipped Adam with the warmup schedule, periodic
// checkpoints. Logs one TSV row per step: step, epoch, lr, loss, grad_norm.
template <typename Scalar>
TrainResult<Scalar> train_model(Model<Scalar>& model,
                                const std::vector<TrainExample<Scalar>>& examples,
                                const TrainConfig& cfg, const std::string& out_dir,
                                std::ostream* log) {
  cfg.validate();
  TASR_REQUIRE(!examples.empty(), "no training examples");
  const InputKind kind = model.config().input_kind;

  AdamState<Scalar> adam = AdamState<Scalar>::init(model.params());
  std::mt19937_64 dropout_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  TrainResult<Scalar> result;

  auto save = [&](int64_t step) {
    std::ostringstream name;
    name << out_dir << "/checkpoint-" << std::setfill('0') << std::setw(6)
         << step << ".tasr";
    save_checkpoint(name.str(), model.config(), model.params());
    result.checkpoint_paths.push_back(name.str());
  };

  int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::vector<size_t> order(examples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 shuffle_rng(cfg.seed * 1000003ull +
                                static_cast<uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_loss = 0.0;
    int64_t epoch_tokens = 0;
    for (const auto& batch : pack_batches(examples, order, cfg.batch_frames, kind)) {
      model.params().zero_grads();
      int batch_tokens = 0;
      for (size_t idx : batch)
        batch_tokens += static_cast<int>(examples[idx].targets.size()) + 1;

      double batch_loss_sum = 0.0;
      for (size_t idx : batch) {
        auto [sum, n] = accumulate_example(model, examples[idx],
                                           cfg.label_smoothing, batch_tokens,
                                           true, &dropout_rng);
        batch_loss_sum += sum;
        (void)n;
      }
      const double batch_loss = batch_loss_sum / batch_tokens;
      epoch_loss += batch_loss_sum;
      epoch_tokens += batch_tokens;

      ++step;
      const double lr = lr_schedule(step, model.config().d_model, cfg.warmup_steps);
      const double norm = clip_and_step(model.params(), adam, lr, cfg.clip_norm);
      if (log)
        *log << step << '\t' << epoch << '\t' << std::setprecision(6) << lr
             << '\t' << batch_loss << '\t' << norm << '\n';
      if (cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) save(step);
    }
    if (cfg.checkpoint_every == 0) save(step);
    result.final_epoch_loss = epoch_loss / static_cast<double>(epoch_tokens);
  }
  result.steps = step;
  return result;
}

}  // namespace tasr

#endif  // TASR_TRAINING_HPP
