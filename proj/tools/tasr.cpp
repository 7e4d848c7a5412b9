// tasr/tools/tasr.cpp

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

// Command-line front door: corpus preparation, unit inventories, training,
// beam-search decoding and error-rate scoring, plus a synthetic toy corpus
// for end-to-end checks.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tasr/bpe.hpp"
#include "tasr/checkpoint.hpp"
#include "tasr/common.hpp"
#include "tasr/data.hpp"
#include "tasr/decode.hpp"
#include "tasr/features.hpp"
#include "tasr/score.hpp"
#include "tasr/text.hpp"
#include "tasr/toy.hpp"
#include "tasr/training.hpp"
#include "tasr/transformer.hpp"
#include "tasr/vocab.hpp"
#include "tasr/wav.hpp"

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------
// shared option bundles

struct UnitResources {
  std::string word_lexicon;
  std::string syllable_lexicon;
  std::string merges_path;

  std::unique_ptr<tasr::Lexicon> lexicon;
  std::unique_ptr<tasr::MergeTable> merges;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--word-lexicon", word_lexicon,
                    "word -> syllables table (syllable/ci_phoneme units)");
    cmd->add_option("--syllable-lexicon", syllable_lexicon,
                    "syllable -> phoneme expansion table");
    cmd->add_option("--merges", merges_path, "learned merge table (subword units)");
  }

  void load() {
    if (!word_lexicon.empty() || !syllable_lexicon.empty()) {
      TASR_REQUIRE(!word_lexicon.empty() && !syllable_lexicon.empty(),
                   "--word-lexicon and --syllable-lexicon go together");
      lexicon = std::make_unique<tasr::Lexicon>(
          tasr::load_lexicon(word_lexicon, syllable_lexicon));
    }
    if (!merges_path.empty())
      merges = std::make_unique<tasr::MergeTable>(tasr::load_merges(merges_path));
  }

  void require_for(tasr::UnitKind kind) const {
    if (kind == tasr::UnitKind::syllable || kind == tasr::UnitKind::ci_phoneme)
      TASR_REQUIRE(lexicon != nullptr,
                   "unit kind '" + tasr::unit_kind_to_string(kind) +
                       "' needs --word-lexicon and --syllable-lexicon");
    if (kind == tasr::UnitKind::subword)
      TASR_REQUIRE(merges != nullptr,
                   "unit kind 'subword' needs --merges");
  }
};

tasr::Model<float> load_model(const std::string& path) {
  auto [cfg, store] = tasr::load_checkpoint<float>(path);
  tasr::Model<float> model(cfg);
  model.params() = std::move(store);
  return model;
}

std::vector<int> encode_with(const std::string& transcript,
                             const tasr::Vocabulary& vocab,
                             const UnitResources& res) {
  return tasr::encode(transcript, vocab, res.lexicon.get(), res.merges.get());
}

// ---------------------------------------------------------------------
// toy-corpus

struct ToyArgs {
  tasr::ToyCorpusConfig cfg;
};

void run_toy(const ToyArgs& a) {
  const tasr::ToyCorpusPaths paths = tasr::generate_toy_corpus(a.cfg);
  std::cout << "train_manifest = " << paths.train_manifest << '\n'
            << "test_manifest = " << paths.test_manifest << '\n'
            << "word_lexicon = " << paths.word_lexicon << '\n'
            << "syllable_lexicon = " << paths.syllable_lexicon << '\n';
}

// ---------------------------------------------------------------------
// prepare

struct PrepareArgs {
  std::string manifest;
  std::string out_dir;
  bool speed_perturb = false;
  tasr::FrontendConfig frontend;
};

void run_prepare(const PrepareArgs& a) {
  const tasr::Manifest manifest = tasr::load_manifest(a.manifest);
  TASR_REQUIRE(!manifest.empty(), "manifest '" + a.manifest + "' is empty");
  fs::create_directories(fs::path(a.out_dir) / "feats");

  struct Item {
    tasr::Utterance utt;
    tasr::FeatureMatrix feats;
  };
  std::vector<Item> items;
  for (const tasr::Utterance& utt : manifest) {
    const tasr::WavData wav =
        tasr::read_wav(tasr::resolve_audio_path(a.manifest, utt.audio_path));
    TASR_REQUIRE(wav.sample_rate_hz == a.frontend.sample_rate_hz,
                 "utterance '" + utt.id + "' has sample rate " +
                     std::to_string(wav.sample_rate_hz) + ", expected " +
                     std::to_string(a.frontend.sample_rate_hz));
    std::vector<double> factors{1.0};
    if (a.speed_perturb) factors = {0.9, 1.0, 1.1};
    for (double f : factors) {
      Item item;
      item.utt = utt;
      item.utt.id = tasr::perturbed_id(utt.id, f);
      const std::vector<float> wave =
          f == 1.0 ? wav.samples : tasr::speed_perturb(wav.samples, f);
      item.feats = tasr::compute_logmel(wave, a.frontend);
      items.push_back(std::move(item));
    }
  }

  // Normalize per speaker over everything prepared in this run, then stack.
  std::map<std::string, std::vector<tasr::FeatureMatrix*>> by_speaker;
  for (Item& item : items) by_speaker[item.utt.speaker_id].push_back(&item.feats);
  tasr::cmvn_by_speaker_inplace(by_speaker);

  tasr::Manifest out;
  out.split_tag = manifest.split_tag;
  for (Item& item : items) {
    const tasr::FeatureMatrix stacked = tasr::stack_downsample(
        item.feats, a.frontend.left_context, a.frontend.downsample);
    const std::string rel = "feats/" + item.utt.id + ".feat";
    tasr::write_feature_cache((fs::path(a.out_dir) / rel).string(), stacked);
    item.utt.audio_path = rel;
    out.utterances.push_back(item.utt);
  }
  std::sort(out.utterances.begin(), out.utterances.end(),
            [](const tasr::Utterance& x, const tasr::Utterance& y) {
              return x.id < y.id;
            });
  const std::string out_manifest = (fs::path(a.out_dir) / "manifest.tsv").string();
  tasr::save_manifest(out, out_manifest);
  std::cout << "prepared = " << out.size() << '\n'
            << "manifest = " << out_manifest << '\n';
}

// ---------------------------------------------------------------------
// learn-bpe

struct LearnBpeArgs {
  std::string manifest;
  std::string out;
  int num_merges = 0;
};

void run_learn_bpe(const LearnBpeArgs& a) {
  const tasr::Manifest manifest = tasr::load_manifest(a.manifest);
  std::map<std::string, int64_t> counts;
  for (const tasr::Utterance& utt : manifest)
    for (const std::string& w : tasr::split_whitespace(utt.transcript))
      counts[w] += 1;
  TASR_REQUIRE(!counts.empty(), "no words in manifest '" + a.manifest + "'");
  const tasr::MergeTable table = tasr::learn_bpe(counts, a.num_merges);
  tasr::save_merges(table, a.out);
  std::cout << "merges = " << table.num_merges() << '\n'
            << "merges_file = " << a.out << '\n';
}

// ---------------------------------------------------------------------
// build-vocab

struct BuildVocabArgs {
  std::string manifest;
  std::string unit;
  std::string out;
  UnitResources res;
};

void run_build_vocab(BuildVocabArgs& a) {
  const tasr::UnitKind kind = tasr::unit_kind_from_string(a.unit);
  a.res.load();
  a.res.require_for(kind);
  const tasr::Manifest manifest = tasr::load_manifest(a.manifest);
  std::vector<std::string> transcripts;
  transcripts.reserve(manifest.size());
  for (const tasr::Utterance& utt : manifest) transcripts.push_back(utt.transcript);
  const tasr::Vocabulary vocab =
      tasr::build_vocab(transcripts, kind, a.res.lexicon.get(), a.res.merges.get());
  tasr::save_vocab(vocab, a.out);
  std::cout << "unit = " << a.unit << '\n'
            << "vocab_size = " << vocab.size() << '\n'
            << "vocab_file = " << a.out << '\n';
}

// ---------------------------------------------------------------------
// train

struct TrainArgs {
  std::string manifest;
  std::string vocab_path;
  std::string unit;
  std::string src_vocab_path;  // token input when set
  std::string src_unit;
  std::string out_dir;
  UnitResources res;
  tasr::ModelConfig model;
  tasr::TrainConfig train;
};

void run_train(TrainArgs& a) {
  a.res.load();
  const tasr::Vocabulary vocab =
      tasr::load_vocab(a.vocab_path, tasr::unit_kind_from_string(a.unit));
  a.res.require_for(vocab.unit_kind);

  std::unique_ptr<tasr::Vocabulary> src_vocab;
  if (!a.src_vocab_path.empty()) {
    TASR_REQUIRE(!a.src_unit.empty(), "--src-vocab needs --src-unit");
    src_vocab = std::make_unique<tasr::Vocabulary>(tasr::load_vocab(
        a.src_vocab_path, tasr::unit_kind_from_string(a.src_unit)));
    a.res.require_for(src_vocab->unit_kind);
    a.model.input_kind = tasr::InputKind::token;
    a.model.src_vocab = src_vocab->size();
  } else {
    a.model.input_kind = tasr::InputKind::filterbank;
  }
  a.model.tgt_vocab = vocab.size();

  const tasr::Manifest manifest = tasr::load_manifest(a.manifest);
  TASR_REQUIRE(!manifest.empty(), "manifest '" + a.manifest + "' is empty");
  std::vector<tasr::TrainExample<float>> examples;
  for (const tasr::Utterance& utt : manifest) {
    tasr::TrainExample<float> ex;
    ex.id = utt.id;
    ex.targets = encode_with(utt.transcript, vocab, a.res);
    if (ex.targets.empty()) {
      std::cerr << "warning: skipping '" << utt.id << "' (empty target)\n";
      continue;
    }
    if (src_vocab) {
      ex.input.tokens = encode_with(utt.transcript, *src_vocab, a.res);
      TASR_REQUIRE(!ex.input.tokens.empty(),
                   "utterance '" + utt.id + "' has an empty source encoding");
    } else {
      ex.input.features = tasr::read_feature_cache(
                              tasr::resolve_audio_path(a.manifest, utt.audio_path))
                              .frames;
      if (a.model.input_dim == 0)
        a.model.input_dim = static_cast<int>(ex.input.features.cols());
      TASR_REQUIRE(ex.input.features.cols() == a.model.input_dim,
                   "utterance '" + utt.id + "' has feature width " +
                       std::to_string(ex.input.features.cols()) + ", expected " +
                       std::to_string(a.model.input_dim));
    }
    examples.push_back(std::move(ex));
  }
  TASR_REQUIRE(!examples.empty(), "no usable training examples");

  a.model.finalize();
  a.model.validate();
  fs::create_directories(a.out_dir);

  tasr::Model<float> model(a.model);
  model.init(a.train.seed);
  std::cout << "parameters = " << tasr::count_parameters(a.model) << '\n';

  std::ofstream log((fs::path(a.out_dir) / "train.log").string());
  TASR_REQUIRE(log.good(), "cannot write train.log in '" + a.out_dir + "'");
  log << "# step\tepoch\tlr\tloss\tgrad_norm\n";
  const tasr::TrainResult<float> result =
      tasr::train_model(model, examples, a.train, a.out_dir, &log);

  const int k = std::min<int>(a.train.average_last,
                              static_cast<int>(result.checkpoint_paths.size()));
  const std::vector<std::string> last(result.checkpoint_paths.end() - k,
                                      result.checkpoint_paths.end());
  auto [cfg, averaged] = tasr::average_checkpoints<float>(last);
  const std::string model_path = (fs::path(a.out_dir) / "model.tasr").string();
  tasr::save_checkpoint(model_path, cfg, averaged);

  std::cout << "steps = " << result.steps << '\n'
            << "final_epoch_loss = " << result.final_epoch_loss << '\n'
            << "averaged_checkpoints = " << k << '\n'
            << "model = " << model_path << '\n';
}

// ---------------------------------------------------------------------
// average

struct AverageArgs {
  std::vector<std::string> checkpoints;
  std::string out;
};

void run_average(const AverageArgs& a) {
  auto [cfg, store] = tasr::average_checkpoints<float>(a.checkpoints);
  tasr::save_checkpoint(a.out, cfg, store);
  std::cout << "averaged = " << a.checkpoints.size() << '\n'
            << "model = " << a.out << '\n';
}

// ---------------------------------------------------------------------
// decode

struct DecodeArgs {
  std::string manifest;
  std::string model_path;
  std::string vocab_path;
  std::string unit;
  std::string out;
  tasr::DecodeConfig cfg;
  // second stage (cascade)
  std::string cascade_model;
  std::string cascade_vocab;  // second-stage target units
  std::string cascade_unit;
  std::string cascade_src_vocab;  // second-stage input units
  int cascade_beam = 6;
};

void run_decode(const DecodeArgs& a) {
  a.cfg.validate();
  tasr::Model<float> model = load_model(a.model_path);
  TASR_REQUIRE(model.config().input_kind == tasr::InputKind::filterbank,
               "decode expects a filterbank-input model");
  const tasr::UnitKind unit = tasr::unit_kind_from_string(a.unit);
  const tasr::Vocabulary vocab = tasr::load_vocab(a.vocab_path, unit);
  TASR_REQUIRE(vocab.size() == model.config().tgt_vocab,
               "vocabulary size does not match the model");

  const bool cascade = !a.cascade_model.empty();
  std::unique_ptr<tasr::Model<float>> second;
  std::unique_ptr<tasr::Vocabulary> second_vocab, second_src;
  tasr::DecodeConfig second_cfg;
  if (cascade) {
    TASR_REQUIRE(!a.cascade_vocab.empty() && !a.cascade_unit.empty() &&
                     !a.cascade_src_vocab.empty(),
                 "--cascade-model needs --cascade-vocab, --cascade-unit and "
                 "--cascade-src-vocab");
    second = std::make_unique<tasr::Model<float>>(load_model(a.cascade_model));
    second_vocab = std::make_unique<tasr::Vocabulary>(tasr::load_vocab(
        a.cascade_vocab, tasr::unit_kind_from_string(a.cascade_unit)));
    // The handoff matches tokens by string, so the first stage's kind works
    // for the second stage's source inventory.
    second_src = std::make_unique<tasr::Vocabulary>(
        tasr::load_vocab(a.cascade_src_vocab, unit));
    TASR_REQUIRE(second_vocab->size() == second->config().tgt_vocab &&
                     second_src->size() == second->config().src_vocab,
                 "cascade vocabularies do not match the second-stage model");
    second_cfg.beam_size = a.cascade_beam;
    // The second stage may emit more tokens than it consumes.
    second_cfg.max_len_factor = 2.0;
    second_cfg.length_norm = a.cfg.length_norm;
  }

  const tasr::Manifest manifest = tasr::load_manifest(a.manifest);
  std::ofstream out(a.out);
  TASR_REQUIRE(out.good(), "cannot write '" + a.out + "'");
  int done = 0;
  for (const tasr::Utterance& utt : manifest) {
    tasr::EncoderInput<float> input;
    input.features =
        tasr::read_feature_cache(tasr::resolve_audio_path(a.manifest, utt.audio_path))
            .frames;
    tasr::Hypothesis best;
    std::string text;
    if (cascade) {
      best = tasr::cascade_decode(model, *second, input, vocab, *second_src,
                                  a.cfg, second_cfg)
                 .front();
      text = tasr::decode_ids(best.units(), *second_vocab);
    } else {
      best = tasr::beam_search(model, input, a.cfg).front();
      text = tasr::decode_ids(best.units(), vocab);
    }
    out << utt.id << '\t' << text << '\t' << std::setprecision(8) << best.log_prob
        << '\n';
    ++done;
  }
  std::cout << "decoded = " << done << '\n' << "hyp_file = " << a.out << '\n';
}

// ---------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string ref_manifest;
  std::string hyp_path;
  std::string report;
};

void run_score(const ScoreArgs& a) {
  const tasr::Manifest refs = tasr::load_manifest(a.ref_manifest);
  std::ifstream in(a.hyp_path);
  TASR_REQUIRE(in.good(), "cannot open hypothesis file '" + a.hyp_path + "'");
  std::map<std::string, std::string> hyps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    TASR_REQUIRE(tab != std::string::npos, a.hyp_path + ":" +
                                               std::to_string(line_no) +
                                               ": expected id<TAB>text");
    const size_t tab2 = line.find('\t', tab + 1);
    const std::string id = line.substr(0, tab);
    const std::string text =
        tab2 == std::string::npos ? line.substr(tab + 1)
                                  : line.substr(tab + 1, tab2 - tab - 1);
    TASR_REQUIRE(hyps.emplace(id, text).second,
                 a.hyp_path + ": duplicate hypothesis for '" + id + "'");
  }

  std::vector<std::pair<std::string, std::string>> pairs;  // ref, hyp
  std::ostringstream per_utt;
  per_utt << "# utt_id\tsub\tins\tdel\tref_len\tcer_percent\n";
  tasr::ErrorCounts totals;
  for (const tasr::Utterance& utt : refs) {
    const auto it = hyps.find(utt.id);
    TASR_REQUIRE(it != hyps.end(), "no hypothesis for utterance '" + utt.id + "'");
    const tasr::ErrorCounts c = tasr::edit_distance(
        tasr::cer_tokenize(utt.transcript), tasr::cer_tokenize(it->second));
    totals.substitutions += c.substitutions;
    totals.insertions += c.insertions;
    totals.deletions += c.deletions;
    totals.ref_length += c.ref_length;
    const double cer =
        c.ref_length > 0 ? 100.0 * c.total() / c.ref_length : 0.0;
    per_utt << utt.id << '\t' << c.substitutions << '\t' << c.insertions << '\t'
            << c.deletions << '\t' << c.ref_length << '\t' << std::fixed
            << std::setprecision(3) << cer << '\n';
    pairs.emplace_back(utt.transcript, it->second);
  }
  const double cer = tasr::corpus_cer(pairs);

  std::ostringstream summary;
  summary << "utterances = " << refs.size() << '\n'
          << "ref_tokens = " << totals.ref_length << '\n'
          << "substitutions = " << totals.substitutions << '\n'
          << "insertions = " << totals.insertions << '\n'
          << "deletions = " << totals.deletions << '\n'
          << "cer_percent = " << std::fixed << std::setprecision(3) << cer << '\n';
  std::cout << summary.str();
  if (!a.report.empty()) {
    std::ofstream rep(a.report);
    TASR_REQUIRE(rep.good(), "cannot write report '" + a.report + "'");
    rep << summary.str() << '\n' << per_utt.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequence-to-sequence speech recognition toolkit"};
  app.require_subcommand(1);

  ToyArgs toy;
  auto* toy_cmd = app.add_subcommand("toy-corpus",
                                     "generate a synthetic tone-coded corpus");
  toy_cmd->add_option("--out", toy.cfg.out_dir, "output directory")->required();
  toy_cmd->add_option("--train-utterances", toy.cfg.train_utterances, "training set size");
  toy_cmd->add_option("--test-utterances", toy.cfg.test_utterances, "test set size");
  toy_cmd->add_option("--min-words", toy.cfg.min_words, "words per utterance, lower bound");
  toy_cmd->add_option("--max-words", toy.cfg.max_words, "words per utterance, upper bound");
  toy_cmd->add_option("--sample-rate", toy.cfg.sample_rate_hz, "sample rate in Hz");
  toy_cmd->add_option("--seed", toy.cfg.seed, "generation seed");

  PrepareArgs prep;
  auto* prep_cmd = app.add_subcommand(
      "prepare", "extract normalized, stacked filterbank features");
  prep_cmd->add_option("--manifest", prep.manifest, "input manifest TSV")->required();
  prep_cmd->add_option("--out", prep.out_dir, "feature directory")->required();
  prep_cmd->add_flag("--speed-perturb", prep.speed_perturb,
                     "add 0.9x and 1.1x copies of every utterance");
  prep_cmd->add_option("--sample-rate", prep.frontend.sample_rate_hz, "sample rate in Hz");
  prep_cmd->add_option("--n-mels", prep.frontend.n_mels, "Mel filter count");
  prep_cmd->add_option("--window-ms", prep.frontend.window_ms, "analysis window (ms)");
  prep_cmd->add_option("--shift-ms", prep.frontend.shift_ms, "frame shift (ms)");
  prep_cmd->add_option("--left-context", prep.frontend.left_context,
                       "frames stacked to the left of each position");
  prep_cmd->add_option("--downsample", prep.frontend.downsample,
                       "keep every k-th stacked frame");

  LearnBpeArgs lb;
  auto* lb_cmd = app.add_subcommand("learn-bpe", "learn a sub-word merge table");
  lb_cmd->add_option("--manifest", lb.manifest, "input manifest TSV")->required();
  lb_cmd->add_option("--out", lb.out, "merge table file")->required();
  lb_cmd->add_option("--num-merges", lb.num_merges, "merge operations to learn")
      ->required();

  BuildVocabArgs bv;
  auto* bv_cmd = app.add_subcommand("build-vocab", "build a unit inventory");
  bv_cmd->add_option("--manifest", bv.manifest, "input manifest TSV")->required();
  bv_cmd->add_option("--unit", bv.unit,
                     "ci_phoneme | syllable | character | subword | word")
      ->required();
  bv_cmd->add_option("--out", bv.out, "vocabulary file")->required();
  bv.res.add_options(bv_cmd);

  TrainArgs tr;
  tr.model.input_dim = 0;  // inferred from the feature cache
  auto* tr_cmd = app.add_subcommand("train", "train a model");
  tr_cmd->add_option("--manifest", tr.manifest, "prepared manifest TSV")->required();
  tr_cmd->add_option("--vocab", tr.vocab_path, "target vocabulary")->required();
  tr_cmd->add_option("--unit", tr.unit,
                     "target unit kind (ci_phoneme | syllable | character | "
                     "subword | word)")
      ->required();
  tr_cmd->add_option("--src-vocab", tr.src_vocab_path,
                     "source vocabulary; switches the encoder to token input");
  tr_cmd->add_option("--src-unit", tr.src_unit, "source unit kind");
  tr_cmd->add_option("--out", tr.out_dir, "output directory")->required();
  tr.res.add_options(tr_cmd);
  tr_cmd->add_option("--num-layers", tr.model.num_layers, "encoder/decoder depth");
  tr_cmd->add_option("--d-model", tr.model.d_model, "model width");
  tr_cmd->add_option("--heads", tr.model.num_heads, "attention heads");
  tr_cmd->add_option("--d-ff", tr.model.d_ff, "feed-forward width (0 = 4*d_model)");
  tr_cmd->add_option("--dropout", tr.model.dropout_rate, "dropout rate");
  tr_cmd->add_option("--epochs", tr.train.max_epochs, "training epochs");
  tr_cmd->add_option("--batch-frames", tr.train.batch_frames,
                     "encoder positions per batch");
  tr_cmd->add_option("--warmup", tr.train.warmup_steps, "schedule warmup steps");
  tr_cmd->add_option("--label-smoothing", tr.train.label_smoothing, "smoothing mass");
  tr_cmd->add_option("--clip-norm", tr.train.clip_norm, "global gradient clip");
  tr_cmd->add_option("--checkpoint-every", tr.train.checkpoint_every,
                     "steps between checkpoints (0 = each epoch)");
  tr_cmd->add_option("--average-last", tr.train.average_last,
                     "checkpoints averaged into model.tasr");
  tr_cmd->add_option("--seed", tr.train.seed, "initialization/shuffle seed");
  tr_cmd->set_config("--config", "", "key = value defaults for these options");

  AverageArgs av;
  auto* av_cmd = app.add_subcommand("average", "average checkpoints");
  av_cmd->add_option("--out", av.out, "output checkpoint")->required();
  av_cmd->add_option("checkpoints", av.checkpoints, "checkpoint files")
      ->required()
      ->expected(-1);

  DecodeArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "beam-search decode a test set");
  dec_cmd->add_option("--manifest", dec.manifest, "prepared manifest TSV")->required();
  dec_cmd->add_option("--model", dec.model_path, "model checkpoint")->required();
  dec_cmd->add_option("--vocab", dec.vocab_path, "target vocabulary")->required();
  dec_cmd->add_option("--unit", dec.unit, "target unit kind")->required();
  dec_cmd->add_option("--out", dec.out, "hypothesis TSV")->required();
  dec_cmd->add_option("--beam", dec.cfg.beam_size, "beam size");
  dec_cmd->add_option("--max-len-factor", dec.cfg.max_len_factor,
                      "emission cap relative to input length");
  dec_cmd->add_flag("--length-norm", dec.cfg.length_norm,
                    "rank hypotheses by length-normalized score");
  dec_cmd->add_option("--cascade-model", dec.cascade_model,
                      "second-stage model; enables two-stage decoding");
  dec_cmd->add_option("--cascade-vocab", dec.cascade_vocab,
                      "second-stage target vocabulary");
  dec_cmd->add_option("--cascade-unit", dec.cascade_unit,
                      "second-stage target unit kind");
  dec_cmd->add_option("--cascade-src-vocab", dec.cascade_src_vocab,
                      "second-stage source vocabulary");
  dec_cmd->add_option("--cascade-beam", dec.cascade_beam, "second-stage beam size");

  ScoreArgs sc;
  auto* sc_cmd = app.add_subcommand("score", "character error rate against a manifest");
  sc_cmd->add_option("--ref", sc.ref_manifest, "reference manifest TSV")->required();
  sc_cmd->add_option("--hyp", sc.hyp_path, "hypothesis TSV from decode")->required();
  sc_cmd->add_option("--report", sc.report, "write summary + per-utterance table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (toy_cmd->parsed()) run_toy(toy);
    if (prep_cmd->parsed()) run_prepare(prep);
    if (lb_cmd->parsed()) run_learn_bpe(lb);
    if (bv_cmd->parsed()) run_build_vocab(bv);
    if (tr_cmd->parsed()) run_train(tr);
    if (av_cmd->parsed()) run_average(av);
    if (dec_cmd->parsed()) run_decode(dec);
    if (sc_cmd->parsed()) run_score(sc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
