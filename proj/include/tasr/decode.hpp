// tasr/decode.hpp

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

#ifndef TASR_DECODE_HPP
#define TASR_DECODE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "tasr/common.hpp"
#include "tasr/graph.hpp"
#include "tasr/transformer.hpp"
#include "tasr/vocab.hpp"

namespace tasr {

struct DecodeConfig {
  int beam_size = 13;
  double max_len_factor = 1.0;  // emission cap = factor * encoder length
  bool length_norm = false;     // rank by log_prob / emitted length

  void validate() const {
    TASR_REQUIRE(beam_size >= 1, "beam size must be >= 1");
    TASR_REQUIRE(max_len_factor > 0.0, "max_len_factor must be positive");
  }
};

struct Hypothesis {
  std::vector<int> ids;  // starts with <S>; ends with </S> once finished
  double log_prob = 0.0;
  bool finished = false;

  // Emitted tokens, i.e. everything after <S>.
  int emitted() const { return static_cast<int>(ids.size()) - 1; }

  double score(bool length_norm) const {
    if (!length_norm) return log_prob;
    return log_prob / std::max(1, emitted());
  }

  // Unit ids without the start/end markers.
  std::vector<int> units() const {
    std::vector<int> out;
    for (size_t i = 1; i < ids.size(); ++i)
      if (!(finished && i + 1 == ids.size() && ids[i] == kEosId))
        out.push_back(ids[i]);
    return out;
  }
};

template <typename Scalar>
RowVectorX<double> log_softmax_row(const RowVectorX<Scalar>& logits) {
  const RowVectorX<double> row = logits.template cast<double>();
  const double mx = row.maxCoeff();
  const RowVectorX<double> shifted = row.array() - mx;
  const double logz = std::log(shifted.array().exp().sum());
  return shifted.array() - logz;
}

// Standard live/finished beam search. Each step extends every live
// hypothesis with every token except <PAD> and <UNK>, keeps the best
// beam_size extensions overall (ties broken by lower token id), and moves
// </S> extensions to the finished pool. The search stops when the live
// pool drains, the emission cap is reached, or no live hypothesis can
// still beat the best finished one (compared on raw log probability).
// Hypotheses alive at the cap are kept as-is, unterminated.
template <typename Scalar>
std::vector<Hypothesis> beam_search(Model<Scalar>& model,
                                    const EncoderInput<Scalar>& input,
                                    const DecodeConfig& cfg) {
  cfg.validate();
  const Eigen::Index enc_len = input.length(model.config().input_kind);
  const int max_emit = std::max<int>(
      1, static_cast<int>(std::llround(cfg.max_len_factor *
                                       static_cast<double>(enc_len))));

  Graph<Scalar> g;
  auto enc = model.encode(g, input);

  std::vector<Hypothesis> live{Hypothesis{{kBosId}, 0.0, false}};
  std::vector<Hypothesis> finished;

  struct Candidate {
    size_t parent;
    int token;
    double log_prob;
  };

  while (!live.empty()) {
    if (live.front().emitted() >= max_emit) break;

    std::vector<Candidate> candidates;
    for (size_t i = 0; i < live.size(); ++i) {
      auto logits = model.decode_logits(g, enc, -1, live[i].ids);
      const RowVectorX<Scalar> last =
          g.value(logits).row(g.value(logits).rows() - 1);
      const RowVectorX<double> logp = log_softmax_row(last);
      for (int tok = 0; tok < logp.size(); ++tok) {
        if (tok == kPadId || tok == kUnkId) continue;
        candidates.push_back({i, tok, live[i].log_prob + logp(tok)});
      }
    }
    const size_t keep = std::min<size_t>(cfg.beam_size, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), [](const Candidate& a, const Candidate& b) {
                        if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                        if (a.token != b.token) return a.token < b.token;
                        return a.parent < b.parent;
                      });
    candidates.resize(keep);

    std::vector<Hypothesis> next_live;
    for (const Candidate& c : candidates) {
      Hypothesis h = live[c.parent];
      h.ids.push_back(c.token);
      h.log_prob = c.log_prob;
      if (c.token == kEosId) {
        h.finished = true;
        finished.push_back(std::move(h));
      } else {
        next_live.push_back(std::move(h));
      }
    }
    live = std::move(next_live);

    if (!finished.empty() && !live.empty()) {
      double best_live = live.front().log_prob;
      for (const Hypothesis& h : live) best_live = std::max(best_live, h.log_prob);
      double best_done = finished.front().log_prob;
      for (const Hypothesis& h : finished)
        best_done = std::max(best_done, h.log_prob);
      if (best_live <= best_done) break;
    }
  }

  std::vector<Hypothesis> all = std::move(finished);
  for (Hypothesis& h : live) all.push_back(std::move(h));
  std::stable_sort(all.begin(), all.end(), [&](const Hypothesis& a, const Hypothesis& b) {
    return a.score(cfg.length_norm) > b.score(cfg.length_norm);
  });
  if (all.size() > static_cast<size_t>(cfg.beam_size))
    all.resize(static_cast<size_t>(cfg.beam_size));
  TASR_REQUIRE(!all.empty(), "beam search produced no hypotheses");
  return all;
}

// Two-stage pipeline: the recognizer's single best unit sequence becomes
// the translator's token input (matched through the vocabularies by token
// string, unknowns mapping to <UNK>). Only the top recognizer hypothesis
// is handed over. Returns the translator's ranked hypotheses.
template <typename Scalar>
std::vector<Hypothesis> cascade_decode(Model<Scalar>& recognizer,
                                       Model<Scalar>& translator,
                                       const EncoderInput<Scalar>& input,
                                       const Vocabulary& recognizer_units,
                                       const Vocabulary& translator_src_units,
                                       const DecodeConfig& recognizer_cfg,
                                       const DecodeConfig& translator_cfg) {
  TASR_REQUIRE(translator.config().input_kind == InputKind::token,
               "cascade second stage must take token input");
  const std::vector<Hypothesis> first =
      beam_search(recognizer, input, recognizer_cfg);
  const std::vector<int> best_units = first.front().units();
  TASR_REQUIRE(!best_units.empty(),
               "recognizer produced an empty unit sequence");

  EncoderInput<Scalar> handoff;
  handoff.tokens.reserve(best_units.size());
  for (int id : best_units)
    handoff.tokens.push_back(
        translator_src_units.id_of(recognizer_units.token_of(id)));
  return beam_search(translator, handoff, translator_cfg);
}

}  // namespace tasr

#endif  // TASR_DECODE_HPP
