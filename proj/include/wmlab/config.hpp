// Copyright 2026 the wmlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WMLAB_CONFIG_HPP
#define WMLAB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmlab/asr.hpp"
#include "wmlab/audio.hpp"
#include "wmlab/datagen.hpp"
#include "wmlab/watermark.hpp"

namespace wmlab::config {

struct DatagenSection {
  std::size_t num_utterances = 500;
  std::size_t min_len = 13;
  std::size_t max_len = 15;
  std::string alphabet = "abcdefgh";
  double base_freq_hz = 500.0;
  double freq_step_hz = 250.0;
  double symbol_ms = 160.0;
  double amplitude = 0.3;
  double noise_level = 0.01;
};

struct TrainSection {
  int hidden_size = 128;
  int epochs = 30;
  double learning_rate = 3e-3;
  int batch_size = 8;
  double momentum = 0.9;
  double grad_clip = 5.0;
};

struct StegoSection {
  int bits_per_step = 1;
  int message_bits = 20;
  std::string message;  // explicit bitstring; empty derives one from the seed
};

struct WatermarkSection {
  int n = 10;
  std::size_t trigger_set_size = 100;
  std::vector<double> key;  // explicit k values; empty derives them from the seed
  double t_wer = 0.25;
  double t_cer = 0.30;
  double finetune_lr = 1e-4;
  int finetune_epochs = 12;
};

struct AttackSection {
  std::string kind = "prune";
  double sparsity = 0.5;
  int recover_epochs = 3;
  int finetune_epochs = 10;
  double finetune_lr = 0.0;  // 0 selects train.learning_rate / 10
  int intercepted = 2;
  std::size_t trigger_set_size = 0;  // 0 sizes to the attacker's data
};

// Whole-experiment configuration. Everything is validated up front; unknown
// keys anywhere in the file are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::string out_dir;
  DatagenSection datagen;
  TrainSection train;
  StegoSection stego;
  WatermarkSection watermark;
  AttackSection attack;

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text);
  void validate() const;

  datagen::ToneLanguageSpec tone_spec() const;
  // Key values: the configured ones, or n seeded draws from [0.05, 0.25].
  audio::TriggerKey trigger_key() const;
  stego::StegoMessage owner_message() const;
  watermark::WatermarkConfig watermark_config() const;
  asr::Hyperparams hyperparams() const;
};

}  // namespace wmlab::config

#endif  // WMLAB_CONFIG_HPP
