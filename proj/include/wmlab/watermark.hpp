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

#ifndef WMLAB_WATERMARK_HPP
#define WMLAB_WATERMARK_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmlab/asr.hpp"
#include "wmlab/audio.hpp"
#include "wmlab/report.hpp"
#include "wmlab/stego.hpp"

namespace wmlab::watermark {

struct WatermarkConfig {
  int n = 10;                        // owner-clip groups
  int message_bits = 20;
  audio::TriggerKey key;             // n positive per-group power ratios
  double t_wer = 0.25;
  double t_cer = 0.30;
  std::size_t trigger_set_size = 100;
  double finetune_lr = 1e-4;
  int finetune_epochs = 12;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TriggerItem {
  audio::AudioClip trigger;
  int clip_index = 0;        // which owner clip / stego group
  std::string source_id;     // utterance the trigger was built from
  double key_value = 0.0;    // k_i used
  double weight = 0.0;       // mixing weight w actually applied
};

// The owner's verification material: triggers grouped by owner clip, the
// stego target labels (clip_index-aligned) and the key that built them.
struct TriggerSet {
  std::vector<TriggerItem> items;         // group-major order
  std::vector<stego::StegoText> stegos;   // size n
  audio::TriggerKey key;

  const stego::StegoText& target_for(const TriggerItem& item) const;
};

struct BuildResult {
  TriggerSet trigger_set;
  // Fine-tuning mixture: every trigger labeled with its stego text plus a
  // clean copy of the same source utterance with its true label.
  std::vector<asr::Utterance> mixture;
};

// Partition sizes for `total` items into n groups, remainder to the lowest
// indices.
std::vector<std::size_t> group_sizes(std::size_t total, int n);

// Selects a seeded random subset of the training data, partitions it into n
// groups, and synthesizes one trigger per selected utterance with its
// group's owner clip and key entry.
BuildResult build_trigger_set(std::span<const asr::Utterance> data,
                              std::span<const audio::AudioClip> owner_clips,
                              const audio::TriggerKey& key,
                              std::span<const stego::StegoText> stegos,
                              const WatermarkConfig& config);

struct FidelityReport {
  bool measured = false;
  double baseline_wer = 0.0;
  double baseline_cer = 0.0;
  double embedded_wer = 0.0;
  double embedded_cer = 0.0;
};

struct EmbedResult {
  asr::AsrModel model;
  FidelityReport fidelity;
  std::vector<double> epoch_loss;
};

// Fine-tunes the baseline on the mixture at the configured rate/epochs.
// When clean_eval is non-empty, clean-set WER/CER are recorded before and
// after for the fidelity report.
EmbedResult embed(const asr::AsrModel& baseline, std::span<const asr::Utterance> mixture,
                  std::span<const asr::Utterance> clean_eval, const WatermarkConfig& config);

// The black-box prediction interface: audio in, transcript out. Extraction
// sees nothing but this.
using PredictFn = std::function<std::string(const audio::AudioClip&)>;

// Wraps a model as a PredictFn.
PredictFn model_predictor(const asr::AsrModel& model);

struct GroupScore {
  int clip_index = 0;
  std::size_t trigger_count = 0;
  double wer = 0.0;
  double cer = 0.0;
  bool passes = false;
};

struct ExtractionReport {
  std::vector<std::string> predictions;  // normalized, trigger order
  double pooled_wer = 0.0;
  double pooled_cer = 0.0;
  std::vector<GroupScore> groups;
  bool watermarked = false;
  std::string verdict_rationale;
  // Present only when the verdict is watermarked.
  std::optional<stego::StegoMessage> recovered_message;
  std::optional<double> ber;
  double threshold_wer = 0.0;
  double threshold_cer = 0.0;

  report::Report to_report() const;
};

// Queries the black box on every trigger, scores predictions against the
// stego targets (pooled and per group), and on a watermarked verdict decodes
// the modal message and its BER against the original. Thresholds are strict:
// a group passes iff WER < t_wer and CER < t_cer, and the model counts as
// watermarked iff at least one group passes (partial jamming of some groups
// must not erase an otherwise-clean watermark; with one group this reduces
// to the pooled comparison).
ExtractionReport extract(const PredictFn& predict_fn, const TriggerSet& trigger_set,
                         const stego::StegoModel& stego_model,
                         const stego::StegoMessage& original,
                         const WatermarkConfig& config);

// Trigger-set persistence: WAVs plus a provenance manifest and the stego
// target lines.
void write_trigger_set(const TriggerSet& trigger_set, const std::filesystem::path& dir);
TriggerSet read_trigger_set(const std::filesystem::path& dir);

}  // namespace wmlab::watermark

#endif  // WMLAB_WATERMARK_HPP
