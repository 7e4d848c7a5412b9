// tasr/tests/test_features.cpp

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
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "tasr/common.hpp"
#include "tasr/wav.hpp"

namespace {

std::vector<float> sine(double freq_hz, double seconds, int sample_rate_hz,
                        float amp = 0.5f) {
  std::vector<float> wave(static_cast<size_t>(seconds * sample_rate_hz));
  for (size_t i = 0; i < wave.size(); ++i)
    wave[i] = amp * static_cast<float>(
                        std::sin(2.0 * M_PI * freq_hz * i / sample_rate_hz));
  return wave;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

}  // namespace

TEST_CASE("frame count: one second at 8 kHz gives 98 frames of width 80") {
  tasr::FrontendConfig cfg;
  const auto f = tasr::compute_logmel(sine(440.0, 1.0, 8000), cfg);
  CHECK(f.num_frames() == 98);
  CHECK(f.dim() == 80);
  CHECK(f.frame_shift_ms == doctest::Approx(10.0f));
  CHECK(f.frames.allFinite());
}

TEST_CASE("frame count formula holds over random lengths") {
  tasr::FrontendConfig cfg;
  const int window = cfg.window_samples();
  const int shift = cfg.shift_samples();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len_dist(window, 4 * 8000);
  for (int trial = 0; trial < 20; ++trial) {
    const int len = len_dist(rng);
    std::vector<float> wave(static_cast<size_t>(len), 0.01f);
    const auto f = tasr::compute_logmel(wave, cfg);
    CHECK(f.num_frames() == (len - window) / shift + 1);
  }
}

TEST_CASE("too-short waveforms are rejected") {
  tasr::FrontendConfig cfg;
  std::vector<float> wave(static_cast<size_t>(cfg.window_samples() - 1), 0.1f);
  CHECK_THROWS_AS(tasr::compute_logmel(wave, cfg), tasr::Error);
}

TEST_CASE("a pure tone peaks in the filter whose center is nearest its frequency") {
  tasr::FrontendConfig cfg;
  // Independently computed filter centers: n_mels + 2 points equally spaced
  // on the Mel axis between 0 Hz and Nyquist; filter m is centered on point
  // m + 1.
  const double nyquist_mel = hz_to_mel(cfg.sample_rate_hz / 2.0);
  const double tone_hz = 1000.0;
  int expect = 0;
  double best = 1e30;
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double center_mel = (m + 1) * nyquist_mel / (cfg.n_mels + 1);
    const double d = std::abs(center_mel - hz_to_mel(tone_hz));
    if (d < best) {
      best = d;
      expect = m;
    }
  }
  const auto f = tasr::compute_logmel(sine(tone_hz, 1.0, cfg.sample_rate_hz), cfg);
  for (Eigen::Index t = 0; t < f.num_frames(); ++t) {
    Eigen::Index argmax = 0;
    f.frames.row(t).maxCoeff(&argmax);
    CHECK(argmax == expect);
  }
}

TEST_CASE("cmvn: hand case {[1],[3]} -> {[-1],[1]}") {
  tasr::FeatureMatrix a, b;
  a.frames = tasr::MatrixXf::Constant(1, 1, 1.0f);
  b.frames = tasr::MatrixXf::Constant(1, 1, 3.0f);
  std::map<std::string, std::vector<tasr::FeatureMatrix>> by_speaker;
  by_speaker["s"].push_back(a);
  by_speaker["s"].push_back(b);
  const auto out = tasr::cmvn_by_speaker(by_speaker);
  CHECK(out.at("s")[0].frames(0, 0) == doctest::Approx(-1.0f));
  CHECK(out.at("s")[1].frames(0, 0) == doctest::Approx(1.0f));
}

TEST_CASE("cmvn: pooled per-speaker mean 0 / variance 1, zero-variance shifted only") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> dist(2.0f, 3.0f);
  std::map<std::string, std::vector<tasr::FeatureMatrix>> by_speaker;
  for (const char* spk : {"a", "b"}) {
    for (int u = 0; u < 3; ++u) {
      tasr::FeatureMatrix f;
      f.frames.resize(17 + u, 4);
      for (Eigen::Index r = 0; r < f.frames.rows(); ++r)
        for (Eigen::Index c = 0; c < f.frames.cols(); ++c)
          f.frames(r, c) = dist(rng);
      f.frames.col(3).setConstant(5.0f);  // zero-variance dimension
      by_speaker[spk].push_back(std::move(f));
    }
  }
  const auto out = tasr::cmvn_by_speaker(by_speaker);
  for (const auto& [spk, mats] : out) {
    Eigen::Index total = 0;
    tasr::RowVectorX<double> sum = tasr::RowVectorX<double>::Zero(4);
    tasr::RowVectorX<double> sumsq = tasr::RowVectorX<double>::Zero(4);
    for (const auto& f : mats) {
      total += f.frames.rows();
      sum += f.frames.cast<double>().colwise().sum();
      sumsq += f.frames.cast<double>().array().square().colwise().sum().matrix();
    }
    for (int d = 0; d < 3; ++d) {
      const double mean = sum(d) / total;
      const double var = sumsq(d) / total - mean * mean;
      CHECK(std::abs(mean) < 1e-3);
      CHECK(std::abs(var - 1.0) < 1e-3);
    }
    // The constant dimension is mean-shifted to zero, not rescaled.
    const double mean3 = sum(3) / total;
    CHECK(std::abs(mean3) < 1e-3);
    for (const auto& f : mats) CHECK((f.frames.col(3).array() == 0.0f).all());
  }
}

TEST_CASE("stacking: 9x80 -> 3x320 with edge copies") {
  tasr::FeatureMatrix f;
  f.frames.resize(9, 80);
  for (Eigen::Index r = 0; r < 9; ++r) f.frames.row(r).setConstant(float(r));
  const auto out = tasr::stack_downsample(f, 3, 3);
  CHECK(out.num_frames() == 3);
  CHECK(out.dim() == 320);
  CHECK(out.frame_shift_ms == doctest::Approx(30.0f));
  // Output row 0 covers input frames [-3..0], clamped to frame 0.
  for (int c = 0; c < 4; ++c) CHECK(out.frames(0, 80 * c) == doctest::Approx(0.0f));
  // Output row 1 covers frames [0,1,2,3] in time order.
  for (int c = 0; c < 4; ++c)
    CHECK(out.frames(1, 80 * c) == doctest::Approx(float(c)));
  // Output row 2 covers frames [3,4,5,6].
  for (int c = 0; c < 4; ++c)
    CHECK(out.frames(2, 80 * c) == doctest::Approx(float(3 + c)));
}

TEST_CASE("stacking: single frame repeats itself") {
  tasr::FeatureMatrix f;
  f.frames = tasr::MatrixXf::Constant(1, 5, 2.5f);
  const auto out = tasr::stack_downsample(f, 3, 3);
  CHECK(out.num_frames() == 1);
  CHECK(out.dim() == 20);
  CHECK((out.frames.array() == 2.5f).all());
}

TEST_CASE("speed perturbation lengths and identity") {
  std::vector<float> wave(8000);
  for (size_t i = 0; i < wave.size(); ++i)
    wave[i] = 0.001f * static_cast<float>(i);

  CHECK(tasr::speed_perturb(wave, 1.0) == wave);
  CHECK(tasr::speed_perturb(wave, 0.9).size() == 8889);
  CHECK(tasr::speed_perturb(wave, 1.1).size() == 7273);
  CHECK_THROWS_AS(tasr::speed_perturb(wave, 0.0), tasr::Error);

  // Linear interpolation maps a linear ramp to a linear ramp.
  const auto slow = tasr::speed_perturb(wave, 0.9);
  for (size_t i = 0; i < slow.size(); i += 500) {
    const double src = static_cast<double>(i) * 0.9;
    if (src <= 7999.0) CHECK(slow[i] == doctest::Approx(0.001 * src).epsilon(1e-4));
  }
}

TEST_CASE("feature cache round trip is exact") {
  tasr::FeatureMatrix f;
  std::mt19937_64 rng(21);
  std::normal_distribution<float> dist(0.0f, 1.0f);
  f.frames.resize(13, 7);
  for (Eigen::Index r = 0; r < 13; ++r)
    for (Eigen::Index c = 0; c < 7; ++c) f.frames(r, c) = dist(rng);
  f.frame_shift_ms = 30.0f;

  const std::string path =
      (std::filesystem::temp_directory_path() / "tasr_cache_rt.feat").string();
  tasr::write_feature_cache(path, f);
  const auto back = tasr::read_feature_cache(path);
  CHECK(back.frame_shift_ms == f.frame_shift_ms);
  REQUIRE(back.frames.rows() == 13);
  REQUIRE(back.frames.cols() == 7);
  CHECK((back.frames.array() == f.frames.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("wav io round trips 16-bit mono PCM") {
  const auto wave = sine(700.0, 0.25, 8000, 0.4f);
  const std::string path =
      (std::filesystem::temp_directory_path() / "tasr_wav_rt.wav").string();
  tasr::write_wav(path, wave, 8000);
  const tasr::WavData back = tasr::read_wav(path);
  CHECK(back.sample_rate_hz == 8000);
  REQUIRE(back.samples.size() == wave.size());
  for (size_t i = 0; i < wave.size(); i += 97)
    CHECK(back.samples[i] == doctest::Approx(wave[i]).epsilon(1e-3));
  std::remove(path.c_str());
}
