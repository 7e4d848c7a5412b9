// tasr/features.hpp

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

#ifndef TASR_FEATURES_HPP
#define TASR_FEATURES_HPP

#include <map>
#include <string>
#include <vector>

#include "tasr/common.hpp"

namespace tasr {

struct FrontendConfig {
  int n_mels = 80;
  double window_ms = 25.0;
  double shift_ms = 10.0;
  int left_context = 3;
  int downsample = 3;
  int sample_rate_hz = 8000;

  int window_samples() const {
    return static_cast<int>(window_ms * sample_rate_hz / 1000.0);
  }
  int shift_samples() const {
    return static_cast<int>(shift_ms * sample_rate_hz / 1000.0);
  }
};

// Time-major acoustic features: one row per frame.
struct FeatureMatrix {
  MatrixXf frames;
  float frame_shift_ms = 10.0f;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

// Log-Mel filterbank: windowed STFT magnitude -> triangular HTK-scale Mel
// filters spanning 0 Hz to Nyquist -> natural log with a 1e-10 floor.
// No pre-emphasis. T = floor((len - window) / shift) + 1.
FeatureMatrix compute_logmel(const std::vector<float>& waveform,
                             const FrontendConfig& cfg);

// Per speaker and per dimension, shifts/scales the pooled frames to mean 0,
// variance 1 (denominator T). Zero-variance dimensions are mean-shifted only.
// Every speaker needs at least 2 pooled frames.
std::map<std::string, std::vector<FeatureMatrix>> cmvn_by_speaker(
    const std::map<std::string, std::vector<FeatureMatrix>>& by_speaker);

// Same normalization, applied in place through pointers (the pipeline form).
void cmvn_by_speaker_inplace(
    const std::map<std::string, std::vector<FeatureMatrix*>>& by_speaker);

// Output frame t' concatenates input frames [t-L .. t] for t = t'*downsample,
// with frames before 0 clamped to frame 0. Output dim = (L+1)*D.
FeatureMatrix stack_downsample(const FeatureMatrix& f, int left_context,
                               int downsample);

// Linear-interpolation resampling of the time axis; output length is
// round(len / factor). Factor 1.0 returns the input unchanged.
std::vector<float> speed_perturb(const std::vector<float>& waveform, double factor);

// Binary per-utterance cache: 16-byte header (magic "TFE1", T and D as
// uint32, shift_ms as float32), then row-major float32 frames.
void write_feature_cache(const std::string& path, const FeatureMatrix& f);
FeatureMatrix read_feature_cache(const std::string& path);

}  // namespace tasr

#endif  // TASR_FEATURES_HPP
