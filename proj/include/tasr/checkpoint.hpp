// tasr/checkpoint.hpp

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

#ifndef TASR_CHECKPOINT_HPP
#define TASR_CHECKPOINT_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tasr/common.hpp"
#include "tasr/transformer.hpp"

namespace tasr {

// Checkpoint layout: a text header (magic, model config, tensor manifest)
// followed by the raw float32 payload, row-major, in manifest order.
//
//   TASRCKPT 1
//   [config]
//   key = value ...
//   [tensors]
//   name rows cols ...
//   [data]
//   <binary>

inline constexpr const char* kCheckpointMagic = "TASRCKPT 1";

template <typename Scalar>
void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     const ParameterStore<Scalar>& store) {
  std::ofstream out(path, std::ios::binary);
  TASR_REQUIRE(out.good(), "cannot write checkpoint '" + path + "'");
  out << kCheckpointMagic << "\n[config]\n" << cfg.to_config().to_string();
  out << "[tensors]\n";
  for (const auto& t : store.tensors())
    out << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << '\n';
  out << "[data]\n";
  std::vector<float> row;
  for (const auto& t : store.tensors()) {
    row.resize(static_cast<size_t>(t.value.cols()));
    for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.value.cols(); ++c)
        row[static_cast<size_t>(c)] = static_cast<float>(t.value(r, c));
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  TASR_REQUIRE(out.good(), "short write on checkpoint '" + path + "'");
}

template <typename Scalar>
std::pair<ModelConfig, ParameterStore<Scalar>> load_checkpoint(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  TASR_REQUIRE(in.good(), "cannot open checkpoint '" + path + "'");
  std::string line;
  TASR_REQUIRE(std::getline(in, line) && line == kCheckpointMagic,
               "'" + path + "' is not a checkpoint file");
  TASR_REQUIRE(std::getline(in, line) && line == "[config]",
               "missing [config] section in '" + path + "'");

  std::string config_text;
  while (std::getline(in, line) && line != "[tensors]") config_text += line + "\n";
  TASR_REQUIRE(line == "[tensors]", "missing [tensors] section in '" + path + "'");
  const ModelConfig cfg =
      ModelConfig::from_config(KeyValueConfig::from_string(config_text));
  cfg.validate();

  std::vector<TensorShape> manifest;
  while (std::getline(in, line) && line != "[data]") {
    std::istringstream ls(line);
    TensorShape s;
    TASR_REQUIRE(static_cast<bool>(ls >> s.name >> s.rows >> s.cols),
                 "bad tensor manifest line in '" + path + "'");
    manifest.push_back(s);
  }
  TASR_REQUIRE(line == "[data]", "missing [data] section in '" + path + "'");

  ParameterStore<Scalar> store = ParameterStore<Scalar>::build(cfg);
  const std::vector<TensorShape> expected = parameter_shapes(cfg);
  TASR_REQUIRE(manifest.size() == expected.size(),
               "tensor manifest does not match the model config in '" + path + "'");
  for (size_t i = 0; i < manifest.size(); ++i)
    TASR_REQUIRE(manifest[i].name == expected[i].name &&
                     manifest[i].rows == expected[i].rows &&
                     manifest[i].cols == expected[i].cols,
                 "tensor '" + manifest[i].name + "' mismatches the model config");

  std::vector<float> row;
  for (auto& t : store.tensors()) {
    row.resize(static_cast<size_t>(t.value.cols()));
    for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
      TASR_REQUIRE(in.good(), "truncated checkpoint payload in '" + path + "'");
      for (Eigen::Index c = 0; c < t.value.cols(); ++c)
        t.value(r, c) = static_cast<Scalar>(row[static_cast<size_t>(c)]);
    }
  }
  return {cfg, std::move(store)};
}

// Element-wise arithmetic mean of several checkpoints with identical
// configurations; accumulation runs in double.
template <typename Scalar>
std::pair<ModelConfig, ParameterStore<Scalar>> average_checkpoints(
    const std::vector<std::string>& paths) {
  TASR_REQUIRE(!paths.empty(), "no checkpoints to average");
  auto [cfg, first] = load_checkpoint<Scalar>(paths[0]);
  const std::string cfg_text = cfg.to_config().to_string();

  std::vector<MatrixX<double>> sums;
  sums.reserve(first.tensors().size());
  for (const auto& t : first.tensors()) sums.push_back(t.value.template cast<double>());

  for (size_t i = 1; i < paths.size(); ++i) {
    auto [other_cfg, other] = load_checkpoint<Scalar>(paths[i]);
    TASR_REQUIRE(other_cfg.to_config().to_string() == cfg_text,
                 "checkpoint '" + paths[i] + "' has a different model config");
    for (size_t j = 0; j < sums.size(); ++j)
      sums[j] += other.tensors()[j].value.template cast<double>();
  }
  const double inv = 1.0 / static_cast<double>(paths.size());
  for (size_t j = 0; j < sums.size(); ++j)
    first.tensors()[j].value = (sums[j] * inv).template cast<Scalar>();
  return {cfg, std::move(first)};
}

}  // namespace tasr

#endif  // TASR_CHECKPOINT_HPP
