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

#include "wmlab/attacks.hpp"

#include <algorithm>
#include <memory>
#include <random>

#include "wmlab/error.hpp"
#include "wmlab/metrics.hpp"
#include "wmlab/rng.hpp"

namespace wmlab::attacks {

std::vector<std::size_t> smallest_magnitude_indices(std::span<const double> values,
                                                    std::size_t count) {
  if (count > values.size()) {
    throw InvalidInputError("smallest_magnitude_indices: count exceeds size");
  }
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) < std::abs(values[b]);
  });
  order.resize(count);
  return order;
}

namespace {

// Zeroes the smallest-magnitude floor(sparsity * size) entries of one weight
// block and clears the matching mask positions.
std::size_t prune_block(Eigen::Ref<Eigen::MatrixXd> weights,
                        Eigen::Ref<Eigen::MatrixXd> mask, double sparsity) {
  const auto size = static_cast<std::size_t>(weights.size());
  const auto count = static_cast<std::size_t>(sparsity * static_cast<double>(size));
  // Column-major flattening; index order only breaks exact magnitude ties.
  std::vector<double> flat(size);
  for (std::size_t i = 0; i < size; ++i) {
    flat[i] = weights(static_cast<Eigen::Index>(i % static_cast<std::size_t>(weights.rows())),
                      static_cast<Eigen::Index>(i / static_cast<std::size_t>(weights.rows())));
  }
  for (std::size_t i : smallest_magnitude_indices(flat, count)) {
    const auto r = static_cast<Eigen::Index>(i % static_cast<std::size_t>(weights.rows()));
    const auto c = static_cast<Eigen::Index>(i / static_cast<std::size_t>(weights.rows()));
    weights(r, c) = 0.0;
    mask(r, c) = 0.0;
  }
  return count;
}

}  // namespace

PruneResult prune_attack(const asr::AsrModel& model, double sparsity,
                         std::span<const asr::Utterance> recover_data, int recover_epochs,
                         double recover_lr) {
  if (!(sparsity >= 0.0) || sparsity >= 1.0) {
    throw InvalidInputError("prune_attack: sparsity must lie in [0, 1)");
  }

  PruneResult result;
  result.model = model;
  result.masks = {Eigen::MatrixXd::Ones(model.gate_weights().rows(), model.gate_weights().cols()),
                  Eigen::MatrixXd::Ones(model.output_weights().rows(),
                                        model.output_weights().cols())};

  // The paper prunes "fully connected layers"; here that maps to the affine
  // blocks of the toy model: the recurrent layer's input and recurrent
  // projections and the output layer. Biases stay.
  auto& gates = result.model.gate_weights();
  auto& gate_mask = result.masks[0];
  const int in_dim = model.input_dim();
  result.zeroed_per_layer.push_back(
      prune_block(gates.leftCols(in_dim), gate_mask.leftCols(in_dim), sparsity));
  result.zeroed_per_layer.push_back(
      prune_block(gates.rightCols(gates.cols() - in_dim),
                  gate_mask.rightCols(gate_mask.cols() - in_dim), sparsity));
  result.zeroed_per_layer.push_back(
      prune_block(result.model.output_weights(), result.masks[1], sparsity));

  if (recover_epochs > 0 && !recover_data.empty()) {
    asr::TrainOptions options;
    options.epochs = recover_epochs;
    options.learning_rate =
        recover_lr > 0.0 ? recover_lr : model.hparams().learning_rate / 10.0;
    options.zero_masks = &result.masks;
    result.model = asr::train(result.model, recover_data, options).model;
  }
  return result;
}

asr::AsrModel finetune_attack(const asr::AsrModel& model,
                              std::span<const asr::Utterance> clean_data, int epochs,
                              double learning_rate) {
  if (epochs == 0) return model;
  return asr::train(model, clean_data, epochs, learning_rate).model;
}

OverwriteResult overwrite_attack(const asr::AsrModel& model,
                                 std::span<const asr::Utterance> attacker_data,
                                 std::span<const audio::AudioClip> attacker_clips,
                                 std::span<const stego::StegoText> attacker_stegos,
                                 const stego::StegoMessage& attacker_message,
                                 const audio::TriggerKey& owner_key,
                                 watermark::WatermarkConfig config, std::uint64_t seed) {
  if (owner_key.values.empty()) {
    throw InvalidInputError("overwrite_attack: empty owner key range");
  }

  OverwriteResult result;
  const auto [lo, hi] =
      std::minmax_element(owner_key.values.begin(), owner_key.values.end());
  Rng rng(derive_seed(seed, "attack.overwrite.key"));
  std::uniform_real_distribution<double> draw(*lo, *hi);
  result.attacker_key.values.resize(attacker_clips.size());
  for (auto& k : result.attacker_key.values) k = draw(rng);
  result.attacker_message = attacker_message;

  config.n = static_cast<int>(attacker_clips.size());
  config.key = result.attacker_key;
  config.seed = derive_seed(seed, "attack.overwrite.subset");

  watermark::BuildResult build = watermark::build_trigger_set(
      attacker_data, attacker_clips, result.attacker_key, attacker_stegos, config);
  result.attacker_trigger_set = std::move(build.trigger_set);
  result.model = watermark::embed(model, build.mixture, {}, config).model;
  return result;
}

namespace {

std::string random_cover_text(Rng& rng) {
  std::uniform_int_distribution<int> total_words(5, 9);
  std::uniform_int_distribution<int> word_len(2, 5);
  std::uniform_int_distribution<int> letter(0, 25);
  std::string out;
  const int words = total_words(rng);
  for (int w = 0; w < words; ++w) {
    if (!out.empty()) out.push_back(' ');
    const int len = word_len(rng);
    for (int j = 0; j < len; ++j) out.push_back(static_cast<char>('a' + letter(rng)));
  }
  return out;
}

}  // namespace

watermark::PredictFn label_detection_evasion(watermark::PredictFn inner,
                                             std::vector<std::string> intercepted_stegos,
                                             std::uint64_t rng_seed) {
  auto state = std::make_shared<Rng>(derive_seed(rng_seed, "attack.evasion"));
  auto intercepted =
      std::make_shared<std::vector<std::string>>(std::move(intercepted_stegos));
  return [inner = std::move(inner), state, intercepted](const audio::AudioClip& clip) {
    const std::string prediction = inner(clip);
    const bool hit = std::find(intercepted->begin(), intercepted->end(), prediction) !=
                     intercepted->end();
    if (!hit) return prediction;
    return random_cover_text(*state);
  };
}

watermark::PredictFn steganalysis_evasion(watermark::PredictFn inner,
                                          TranscriptClassifier classifier,
                                          std::uint64_t rng_seed) {
  if (!classifier) return inner;  // no classifier shipped; pass-through
  auto state = std::make_shared<Rng>(derive_seed(rng_seed, "attack.steganalysis"));
  return [inner = std::move(inner), classifier = std::move(classifier),
          state](const audio::AudioClip& clip) {
    const std::string prediction = inner(clip);
    if (!classifier(prediction)) return prediction;
    return random_cover_text(*state);
  };
}

AttackReport evaluate_attack(const std::string& name,
                             const watermark::PredictFn& predict_fn,
                             std::span<const asr::Utterance> clean_eval,
                             const watermark::TriggerSet& owner_triggers,
                             const stego::StegoModel& owner_stego_model,
                             const stego::StegoMessage& owner_message,
                             const watermark::WatermarkConfig& config) {
  AttackReport report;
  report.name = name;

  const asr::Vocab vocab;
  std::vector<std::string> refs, hyps;
  for (const auto& utt : clean_eval) {
    refs.push_back(asr::normalize_text(utt.transcript, vocab));
    hyps.push_back(asr::normalize_text(predict_fn(utt.audio), vocab));
  }
  const auto clean = metrics::score(refs, hyps);
  report.clean_wer = clean.wer;
  report.clean_cer = clean.cer;

  report.extraction = watermark::extract(predict_fn, owner_triggers, owner_stego_model,
                                         owner_message, config);
  return report;
}

report::Report AttackReport::to_report() const {
  report::Report out;
  out.add("kind", std::string("attack"));
  out.add("attack", name);
  for (const auto& [k, v] : params) out.add("param." + k, v);
  out.add("clean.wer", clean_wer);
  out.add("clean.cer", clean_cer);
  for (const auto& [k, v] : extraction.to_report().entries()) {
    if (k.rfind("prediction.", 0) == 0) continue;  // keep attack reports compact
    out.add("extraction." + k, v);
  }
  return out;
}

}  // namespace wmlab::attacks
