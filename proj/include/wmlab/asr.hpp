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

#ifndef WMLAB_ASR_HPP
#define WMLAB_ASR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wmlab/audio.hpp"
#include "wmlab/ctc.hpp"

namespace wmlab::asr {

// Character inventory plus the CTC blank, which lives at the last class
// index and is not part of `characters`.
struct Vocab {
  std::string characters = "abcdefghijklmnopqrstuvwxyz '";

  int num_classes() const { return static_cast<int>(characters.size()) + 1; }
  int blank_index() const { return static_cast<int>(characters.size()); }
  int char_index(char c) const;

  std::vector<int> encode(const std::string& text) const;
  std::string decode(std::span<const int> labels) const;

  bool operator==(const Vocab&) const = default;
};

// Lowercase, strip characters outside the vocab, collapse whitespace runs,
// trim. Applied identically at training and scoring.
std::string normalize_text(const std::string& text, const Vocab& vocab);

struct FrontendConfig {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  int num_filters = 26;
  int fft_size = 512;

  bool operator==(const FrontendConfig&) const = default;
};

struct FeatureFrames {
  Eigen::MatrixXd frames;  // num_frames x num_filters
  double frame_len_ms = 25.0;
  double frame_hop_ms = 10.0;
};

// Log mel filter-bank energies with per-utterance mean/variance
// normalization. Frame count is floor((len - frame_len) / hop) + 1; clips
// shorter than one frame are rejected.
FeatureFrames extract_features(const audio::AudioClip& clip, const FrontendConfig& config);

struct Hyperparams {
  double learning_rate = 1e-4;
  int batch_size = 8;
  std::uint64_t seed = 0;
  double momentum = 0.9;
  double grad_clip = 5.0;

  bool operator==(const Hyperparams&) const = default;
};

struct Utterance {
  std::string id;
  audio::AudioClip audio;
  std::string transcript;
};

// One LSTM layer feeding an affine output layer over num_classes. All math
// in double precision; forward passes and loss are pure functions.
class AsrModel {
 public:
  AsrModel() = default;  // empty placeholder; build real models with init()

  static AsrModel init(const Vocab& vocab, const FrontendConfig& frontend,
                       int hidden_size, const Hyperparams& hparams);

  const Vocab& vocab() const { return vocab_; }
  const FrontendConfig& frontend() const { return frontend_; }
  const Hyperparams& hparams() const { return hparams_; }
  Hyperparams& hparams() { return hparams_; }
  int hidden_size() const { return hidden_size_; }
  int input_dim() const { return input_dim_; }

  // Gate weights over [x; h], laid out as 4 stacked hidden-size blocks
  // (input, forget, cell, output gates).
  Eigen::MatrixXd& gate_weights() { return w_gates_; }
  const Eigen::MatrixXd& gate_weights() const { return w_gates_; }
  Eigen::VectorXd& gate_bias() { return b_gates_; }
  const Eigen::VectorXd& gate_bias() const { return b_gates_; }
  Eigen::MatrixXd& output_weights() { return w_out_; }
  const Eigen::MatrixXd& output_weights() const { return w_out_; }
  Eigen::VectorXd& output_bias() { return b_out_; }
  const Eigen::VectorXd& output_bias() const { return b_out_; }

  // Per-frame log-probabilities (frames x classes); rows log-sum-exp to zero.
  Eigen::MatrixXd forward_log_probs(const FeatureFrames& features) const;

  bool operator==(const AsrModel&) const = default;

 private:
  Vocab vocab_;
  FrontendConfig frontend_;
  Hyperparams hparams_;
  int input_dim_ = 0;
  int hidden_size_ = 0;
  Eigen::MatrixXd w_gates_;  // 4H x (I + H)
  Eigen::VectorXd b_gates_;  // 4H
  Eigen::MatrixXd w_out_;    // C x H
  Eigen::VectorXd b_out_;    // C
};

// Per-frame argmax (ties to the lowest class), collapse repeats, drop blanks.
std::string greedy_decode(const Eigen::MatrixXd& log_probs, const Vocab& vocab);

struct TrainResult {
  AsrModel model;
  std::vector<double> epoch_loss;        // mean per-utterance NLL
  std::size_t skipped_infeasible = 0;    // targets longer than their audio allows
};

// Mini-batch momentum SGD with global-norm gradient clipping. Deterministic:
// a fixed seed shuffles identically and gradients reduce in index order, so
// repeated runs produce bitwise-identical weights. epochs == 0 returns the
// model unchanged. An optional mask pins the matching weight entries to zero
// after every update (used by pruning recovery).
struct TrainOptions {
  int epochs = 1;
  double learning_rate = 1e-4;
  const std::vector<Eigen::MatrixXd>* zero_masks = nullptr;  // {gate, output}
};
TrainResult train(const AsrModel& model, std::span<const Utterance> data,
                  const TrainOptions& options);
TrainResult train(const AsrModel& model, std::span<const Utterance> data, int epochs,
                  double learning_rate);

// extract_features -> forward -> greedy_decode.
std::string predict(const AsrModel& model, const audio::AudioClip& clip);

// Versioned binary checkpoint with a trailing content hash.
void save_checkpoint(const AsrModel& model, const std::filesystem::path& path);
AsrModel load_checkpoint(const std::filesystem::path& path);

// Dataset manifests: UTF-8 lines "relative/path.wav<TAB>transcript".
std::vector<Utterance> read_manifest(const std::filesystem::path& manifest_path);
void write_manifest(std::span<const Utterance> utterances,
                    const std::filesystem::path& audio_dir,
                    const std::filesystem::path& manifest_path);

}  // namespace wmlab::asr

#endif  // WMLAB_ASR_HPP
