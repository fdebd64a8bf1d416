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

#ifndef WMLAB_ATTACKS_HPP
#define WMLAB_ATTACKS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wmlab/asr.hpp"
#include "wmlab/report.hpp"
#include "wmlab/watermark.hpp"

namespace wmlab::attacks {

// Adversary toolkit. Every attack copies the model; the victim instance is
// never mutated.

// Indices of the `count` smallest-magnitude values, ties at the cutoff going
// to the lower index.
std::vector<std::size_t> smallest_magnitude_indices(std::span<const double> values,
                                                    std::size_t count);

struct PruneResult {
  asr::AsrModel model;
  // Zero-masks over {gate weights, output weights}; 0 marks a pruned entry.
  std::vector<Eigen::MatrixXd> masks;
  // Zeroed-entry counts for the three pruned layers: the recurrent layer's
  // input projection, its recurrent projection, and the output layer.
  std::vector<std::size_t> zeroed_per_layer;
};

// Amplitude pruning: per layer, the floor(sparsity * size) smallest weights
// go to zero, then a short recovery fine-tune runs with the pruned entries
// masked so they stay exactly zero. recover_lr <= 0 selects one tenth of the
// model's base learning rate.
PruneResult prune_attack(const asr::AsrModel& model, double sparsity,
                         std::span<const asr::Utterance> recover_data,
                         int recover_epochs = 3, double recover_lr = 0.0);

// Plain fine-tuning on clean data; the paper's attacker rate is one tenth of
// the original.
asr::AsrModel finetune_attack(const asr::AsrModel& model,
                              std::span<const asr::Utterance> clean_data, int epochs,
                              double learning_rate);

struct OverwriteResult {
  asr::AsrModel model;
  audio::TriggerKey attacker_key;  // k' ~ U[min(owner k), max(owner k)]
  watermark::TriggerSet attacker_trigger_set;
  stego::StegoMessage attacker_message;
};

// Runs the whole embedding pipeline with attacker materials: a fresh key
// drawn between the extremes of the owner's key, the attacker's own clips,
// stegos and data.
OverwriteResult overwrite_attack(const asr::AsrModel& model,
                                 std::span<const asr::Utterance> attacker_data,
                                 std::span<const audio::AudioClip> attacker_clips,
                                 std::span<const stego::StegoText> attacker_stegos,
                                 const stego::StegoMessage& attacker_message,
                                 const audio::TriggerKey& owner_key,
                                 watermark::WatermarkConfig config, std::uint64_t seed);

// Label-detection evasion: whenever the inner prediction exactly equals one
// of the intercepted stego texts, a seeded random string replaces it.
watermark::PredictFn label_detection_evasion(watermark::PredictFn inner,
                                             std::vector<std::string> intercepted_stegos,
                                             std::uint64_t rng_seed);

// Hook for a steganalysis-driven detector: the classifier flags transcripts
// to replace. No default classifier ships; a null classifier yields the
// inner predictor unchanged.
using TranscriptClassifier = std::function<bool(const std::string&)>;
watermark::PredictFn steganalysis_evasion(watermark::PredictFn inner,
                                          TranscriptClassifier classifier,
                                          std::uint64_t rng_seed);

struct AttackReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  double clean_wer = 0.0;
  double clean_cer = 0.0;
  watermark::ExtractionReport extraction;

  report::Report to_report() const;
};

// Clean accuracy plus owner-watermark extraction through an attacked
// prediction interface.
AttackReport evaluate_attack(const std::string& name,
                             const watermark::PredictFn& predict_fn,
                             std::span<const asr::Utterance> clean_eval,
                             const watermark::TriggerSet& owner_triggers,
                             const stego::StegoModel& owner_stego_model,
                             const stego::StegoMessage& owner_message,
                             const watermark::WatermarkConfig& config);

}  // namespace wmlab::attacks

#endif  // WMLAB_ATTACKS_HPP
