// tasr/features.cpp

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

#include "tasr/features.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace tasr {

namespace {

constexpr float kLogFloor = 1e-10f;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

// Triangular filters, linear in the Mel domain, centers equally spaced
// between 0 Hz and Nyquist. Returns (n_bins x n_mels).
MatrixXf mel_filterbank(int n_fft, int sample_rate_hz, int n_mels) {
  const int n_bins = n_fft / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate_hz / 2.0);
  std::vector<double> centers(n_mels + 2);
  for (int m = 0; m < n_mels + 2; ++m)
    centers[m] = mel_max * m / (n_mels + 1);

  MatrixXf fb = MatrixXf::Zero(n_bins, n_mels);
  for (int k = 0; k < n_bins; ++k) {
    const double mel_k = hz_to_mel(static_cast<double>(k) * sample_rate_hz / n_fft);
    for (int m = 0; m < n_mels; ++m) {
      const double left = centers[m], center = centers[m + 1], right = centers[m + 2];
      double w = 0.0;
      if (mel_k >= left && mel_k <= center && center > left)
        w = (mel_k - left) / (center - left);
      else if (mel_k > center && mel_k <= right && right > center)
        w = (right - mel_k) / (right - center);
      fb(k, m) = static_cast<float>(w);
    }
  }
  return fb;
}

}  // namespace

FeatureMatrix compute_logmel(const std::vector<float>& waveform,
                             const FrontendConfig& cfg) {
  const int window = cfg.window_samples();
  const int shift = cfg.shift_samples();
  TASR_REQUIRE(cfg.n_mels > 0, "n_mels must be positive");
  TASR_REQUIRE(window > 0 && shift > 0, "window and shift must be positive");
  TASR_REQUIRE(static_cast<int>(waveform.size()) >= window,
               "waveform shorter than one analysis window");
  for (float s : waveform)
    TASR_REQUIRE(std::isfinite(s), "non-finite sample in waveform");

  const int num_frames = (static_cast<int>(waveform.size()) - window) / shift + 1;
  const int n_fft = next_pow2(window);
  const int n_bins = n_fft / 2 + 1;

  VectorXf ham(window);
  for (int n = 0; n < window; ++n)
    ham(n) = 0.54f - 0.46f * std::cos(2.0 * M_PI * n / (window - 1));

  // Windowed frames, zero-padded to n_fft.
  MatrixXf frames = MatrixXf::Zero(num_frames, n_fft);
  for (int t = 0; t < num_frames; ++t)
    for (int n = 0; n < window; ++n)
      frames(t, n) = waveform[t * shift + n] * ham(n);

  // Real DFT as two dense bases; one GEMM per component covers the utterance.
  MatrixXf cos_basis(n_fft, n_bins), sin_basis(n_fft, n_bins);
  for (int n = 0; n < n_fft; ++n)
    for (int k = 0; k < n_bins; ++k) {
      const double ang = 2.0 * M_PI * n * k / n_fft;
      cos_basis(n, k) = static_cast<float>(std::cos(ang));
      sin_basis(n, k) = static_cast<float>(-std::sin(ang));
    }
  const MatrixXf re = frames * cos_basis;
  const MatrixXf im = frames * sin_basis;
  const MatrixXf mag = (re.array().square() + im.array().square()).sqrt();

  const MatrixXf fb = mel_filterbank(n_fft, cfg.sample_rate_hz, cfg.n_mels);
  FeatureMatrix out;
  out.frames = (mag * fb).array().max(kLogFloor).log().matrix();
  out.frame_shift_ms = static_cast<float>(cfg.shift_ms);
  return out;
}

void cmvn_by_speaker_inplace(
    const std::map<std::string, std::vector<FeatureMatrix*>>& by_speaker) {
  for (const auto& [speaker, mats] : by_speaker) {
    Eigen::Index total_frames = 0;
    Eigen::Index dim = -1;
    for (const FeatureMatrix* f : mats) {
      total_frames += f->num_frames();
      if (dim < 0) dim = f->dim();
      TASR_REQUIRE(dim == f->dim(), "inconsistent feature dim for speaker " + speaker);
    }
    TASR_REQUIRE(total_frames >= 2,
                 "speaker \"" + speaker + "\" has fewer than 2 frames");

    RowVectorX<double> sum = RowVectorX<double>::Zero(dim);
    RowVectorX<double> sumsq = RowVectorX<double>::Zero(dim);
    for (const FeatureMatrix* f : mats) {
      sum += f->frames.cast<double>().colwise().sum();
      sumsq += f->frames.cast<double>().array().square().colwise().sum().matrix();
    }
    const RowVectorX<double> mean = sum / static_cast<double>(total_frames);
    RowVectorX<double> var =
        sumsq / static_cast<double>(total_frames) - mean.array().square().matrix();
    var = var.cwiseMax(0.0);

    RowVectorXf mean_f = mean.cast<float>();
    RowVectorXf inv_std(dim);
    for (Eigen::Index d = 0; d < dim; ++d)
      inv_std(d) = var(d) > 0.0 ? static_cast<float>(1.0 / std::sqrt(var(d))) : 1.0f;

    for (FeatureMatrix* f : mats) {
      f->frames = ((f->frames.rowwise() - mean_f).array().rowwise() *
                   inv_std.array())
                      .matrix();
    }
  }
}

std::map<std::string, std::vector<FeatureMatrix>> cmvn_by_speaker(
    const std::map<std::string, std::vector<FeatureMatrix>>& by_speaker) {
  std::map<std::string, std::vector<FeatureMatrix>> out = by_speaker;
  std::map<std::string, std::vector<FeatureMatrix*>> ptrs;
  for (auto& [speaker, mats] : out)
    for (FeatureMatrix& f : mats) ptrs[speaker].push_back(&f);
  cmvn_by_speaker_inplace(ptrs);
  return out;
}

FeatureMatrix stack_downsample(const FeatureMatrix& f, int left_context,
                               int downsample) {
  TASR_REQUIRE(f.num_frames() >= 1, "stack_downsample needs at least one frame");
  TASR_REQUIRE(left_context >= 0 && downsample >= 1, "bad stacking parameters");

  const Eigen::Index in_t = f.num_frames();
  const Eigen::Index dim = f.dim();
  const Eigen::Index out_t = (in_t + downsample - 1) / downsample;

  FeatureMatrix out;
  out.frames.resize(out_t, (left_context + 1) * dim);
  for (Eigen::Index tp = 0; tp < out_t; ++tp) {
    const Eigen::Index t = tp * downsample;
    for (int c = 0; c <= left_context; ++c) {
      const Eigen::Index src = std::max<Eigen::Index>(0, t - left_context + c);
      out.frames.block(tp, c * dim, 1, dim) = f.frames.row(src);
    }
  }
  out.frame_shift_ms = f.frame_shift_ms * static_cast<float>(downsample);
  return out;
}

std::vector<float> speed_perturb(const std::vector<float>& waveform, double factor) {
  TASR_REQUIRE(factor > 0.0, "speed perturbation factor must be positive");
  if (factor == 1.0) return waveform;

  const size_t in_len = waveform.size();
  if (in_len == 0) return {};
  const size_t out_len =
      static_cast<size_t>(std::llround(static_cast<double>(in_len) / factor));
  std::vector<float> out(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    const double pos = std::min(static_cast<double>(i) * factor,
                                static_cast<double>(in_len - 1));
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, in_len - 1);
    const double frac = pos - static_cast<double>(lo);
    out[i] = static_cast<float>((1.0 - frac) * waveform[lo] + frac * waveform[hi]);
  }
  return out;
}

void write_feature_cache(const std::string& path, const FeatureMatrix& f) {
  std::ofstream out(path, std::ios::binary);
  TASR_REQUIRE(out.good(), "cannot write feature cache: " + path);
  const char magic[4] = {'T', 'F', 'E', '1'};
  const uint32_t t = static_cast<uint32_t>(f.num_frames());
  const uint32_t d = static_cast<uint32_t>(f.dim());
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&t), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&f.frame_shift_ms), 4);
  for (Eigen::Index r = 0; r < f.num_frames(); ++r)
    for (Eigen::Index c = 0; c < f.dim(); ++c) {
      const float v = f.frames(r, c);
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
}

FeatureMatrix read_feature_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  TASR_REQUIRE(in.good(), "cannot open feature cache: " + path);
  char magic[4];
  in.read(magic, 4);
  TASR_REQUIRE(std::strncmp(magic, "TFE1", 4) == 0, path + ": bad cache magic");
  uint32_t t = 0, d = 0;
  float shift = 0.0f;
  in.read(reinterpret_cast<char*>(&t), 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  in.read(reinterpret_cast<char*>(&shift), 4);
  FeatureMatrix f;
  f.frames.resize(t, d);
  f.frame_shift_ms = shift;
  for (uint32_t r = 0; r < t; ++r)
    for (uint32_t c = 0; c < d; ++c) {
      float v;
      in.read(reinterpret_cast<char*>(&v), 4);
      f.frames(r, c) = v;
    }
  TASR_REQUIRE(in.good(), path + ": truncated feature cache");
  return f;
}

}  // namespace tasr
