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

#include "wmlab/config.hpp"

#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "wmlab/error.hpp"
#include "wmlab/rng.hpp"

namespace wmlab::config {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

template <typename T>
void get_to(const json& obj, const std::string& where, const std::string& key, T& out) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(out);
  } catch (const json::exception& e) {
    throw ConfigError(where.empty() ? key : where + "." + key, e.what());
  }
}

void parse_datagen(const json& obj, DatagenSection& out) {
  reject_unknown(obj, "datagen",
                 {"num_utterances", "min_len", "max_len", "alphabet", "base_freq_hz",
                  "freq_step_hz", "symbol_ms", "amplitude", "noise_level"});
  get_to(obj, "datagen", "num_utterances", out.num_utterances);
  get_to(obj, "datagen", "min_len", out.min_len);
  get_to(obj, "datagen", "max_len", out.max_len);
  get_to(obj, "datagen", "alphabet", out.alphabet);
  get_to(obj, "datagen", "base_freq_hz", out.base_freq_hz);
  get_to(obj, "datagen", "freq_step_hz", out.freq_step_hz);
  get_to(obj, "datagen", "symbol_ms", out.symbol_ms);
  get_to(obj, "datagen", "amplitude", out.amplitude);
  get_to(obj, "datagen", "noise_level", out.noise_level);
}

void parse_train(const json& obj, TrainSection& out) {
  reject_unknown(obj, "train",
                 {"hidden_size", "epochs", "learning_rate", "batch_size", "momentum",
                  "grad_clip"});
  get_to(obj, "train", "hidden_size", out.hidden_size);
  get_to(obj, "train", "epochs", out.epochs);
  get_to(obj, "train", "learning_rate", out.learning_rate);
  get_to(obj, "train", "batch_size", out.batch_size);
  get_to(obj, "train", "momentum", out.momentum);
  get_to(obj, "train", "grad_clip", out.grad_clip);
}

void parse_stego(const json& obj, StegoSection& out) {
  reject_unknown(obj, "stego", {"bits_per_step", "message_bits", "message"});
  get_to(obj, "stego", "bits_per_step", out.bits_per_step);
  get_to(obj, "stego", "message_bits", out.message_bits);
  get_to(obj, "stego", "message", out.message);
}

void parse_watermark(const json& obj, WatermarkSection& out) {
  reject_unknown(obj, "watermark",
                 {"n", "trigger_set_size", "key", "t_wer", "t_cer", "finetune_lr",
                  "finetune_epochs"});
  get_to(obj, "watermark", "n", out.n);
  get_to(obj, "watermark", "trigger_set_size", out.trigger_set_size);
  get_to(obj, "watermark", "key", out.key);
  get_to(obj, "watermark", "t_wer", out.t_wer);
  get_to(obj, "watermark", "t_cer", out.t_cer);
  get_to(obj, "watermark", "finetune_lr", out.finetune_lr);
  get_to(obj, "watermark", "finetune_epochs", out.finetune_epochs);
}

void parse_attack(const json& obj, AttackSection& out) {
  reject_unknown(obj, "attack",
                 {"kind", "sparsity", "recover_epochs", "finetune_epochs", "finetune_lr",
                  "intercepted", "trigger_set_size"});
  get_to(obj, "attack", "kind", out.kind);
  get_to(obj, "attack", "sparsity", out.sparsity);
  get_to(obj, "attack", "recover_epochs", out.recover_epochs);
  get_to(obj, "attack", "finetune_epochs", out.finetune_epochs);
  get_to(obj, "attack", "finetune_lr", out.finetune_lr);
  get_to(obj, "attack", "intercepted", out.intercepted);
  get_to(obj, "attack", "trigger_set_size", out.trigger_set_size);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string(), "cannot open config file");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("<root>", "config must be a JSON object");
  }
  reject_unknown(root, "", {"seed", "out_dir", "datagen", "train", "stego", "watermark",
                            "attack"});

  ExperimentConfig cfg;
  get_to(root, "", "seed", cfg.seed);
  get_to(root, "", "out_dir", cfg.out_dir);
  if (root.contains("datagen")) parse_datagen(root.at("datagen"), cfg.datagen);
  if (root.contains("train")) parse_train(root.at("train"), cfg.train);
  if (root.contains("stego")) parse_stego(root.at("stego"), cfg.stego);
  if (root.contains("watermark")) parse_watermark(root.at("watermark"), cfg.watermark);
  if (root.contains("attack")) parse_attack(root.at("attack"), cfg.attack);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  tone_spec().validate();
  if (datagen.num_utterances < 5) {
    throw ConfigError("datagen.num_utterances", "need at least 5 utterances");
  }
  if (datagen.min_len < 1 || datagen.max_len < datagen.min_len) {
    throw ConfigError("datagen.min_len", "need max_len >= min_len >= 1");
  }
  if (train.hidden_size < 1) throw ConfigError("train.hidden_size", "must be >= 1");
  if (train.epochs < 0) throw ConfigError("train.epochs", "must be >= 0");
  if (!(train.learning_rate > 0.0)) throw ConfigError("train.learning_rate", "must be > 0");
  if (train.batch_size < 1) throw ConfigError("train.batch_size", "must be >= 1");
  if (train.momentum < 0.0 || train.momentum >= 1.0) {
    throw ConfigError("train.momentum", "must lie in [0, 1)");
  }
  if (train.grad_clip < 0.0) throw ConfigError("train.grad_clip", "must be >= 0");
  if (stego.bits_per_step < 1 || stego.bits_per_step > 8) {
    throw ConfigError("stego.bits_per_step", "must lie in [1, 8]");
  }
  if (stego.message_bits < 1) throw ConfigError("stego.message_bits", "must be >= 1");
  if (!stego.message.empty()) {
    if (stego.message.size() != static_cast<std::size_t>(stego.message_bits)) {
      throw ConfigError("stego.message", "length must equal message_bits");
    }
    for (char c : stego.message) {
      if (c != '0' && c != '1') throw ConfigError("stego.message", "must be a bitstring");
    }
  }
  if (watermark.n < 1) throw ConfigError("watermark.n", "must be >= 1");
  if (!watermark.key.empty()) {
    if (watermark.key.size() != static_cast<std::size_t>(watermark.n)) {
      throw ConfigError("watermark.key", "length must equal n");
    }
    for (double k : watermark.key) {
      if (!(k > 0.0)) throw ConfigError("watermark.key", "values must be > 0");
    }
  }
  if (!(watermark.t_wer > 0.0 && watermark.t_wer < 1.0)) {
    throw ConfigError("watermark.t_wer", "must lie in (0, 1)");
  }
  if (!(watermark.t_cer > 0.0 && watermark.t_cer < 1.0)) {
    throw ConfigError("watermark.t_cer", "must lie in (0, 1)");
  }
  if (!(watermark.finetune_lr > 0.0)) {
    throw ConfigError("watermark.finetune_lr", "must be > 0");
  }
  if (watermark.finetune_epochs < 0) {
    throw ConfigError("watermark.finetune_epochs", "must be >= 0");
  }
  if (watermark.trigger_set_size < static_cast<std::size_t>(watermark.n)) {
    throw ConfigError("watermark.trigger_set_size", "must be >= n");
  }
  static const std::set<std::string> kAttackKinds = {"prune", "finetune", "overwrite",
                                                     "evade"};
  if (!kAttackKinds.contains(attack.kind)) {
    throw ConfigError("attack.kind", "must be prune, finetune, overwrite or evade");
  }
  if (!(attack.sparsity >= 0.0) || attack.sparsity >= 1.0) {
    throw ConfigError("attack.sparsity", "must lie in [0, 1)");
  }
  if (attack.recover_epochs < 0) throw ConfigError("attack.recover_epochs", "must be >= 0");
  if (attack.finetune_epochs < 0) throw ConfigError("attack.finetune_epochs", "must be >= 0");
  if (attack.finetune_lr < 0.0) throw ConfigError("attack.finetune_lr", "must be >= 0");
  if (attack.intercepted < 0 || attack.intercepted > watermark.n) {
    throw ConfigError("attack.intercepted", "must lie in [0, n]");
  }
}

datagen::ToneLanguageSpec ExperimentConfig::tone_spec() const {
  datagen::ToneLanguageSpec spec;
  spec.alphabet = datagen.alphabet;
  spec.base_freq_hz = datagen.base_freq_hz;
  spec.freq_step_hz = datagen.freq_step_hz;
  spec.symbol_ms = datagen.symbol_ms;
  spec.amplitude = datagen.amplitude;
  spec.noise_level = datagen.noise_level;
  spec.seed = derive_seed(seed, "datagen");
  return spec;
}

audio::TriggerKey ExperimentConfig::trigger_key() const {
  audio::TriggerKey key;
  if (!watermark.key.empty()) {
    key.values = watermark.key;
    return key;
  }
  Rng rng(derive_seed(seed, "watermark.key"));
  std::uniform_real_distribution<double> draw(0.05, 0.25);
  key.values.resize(static_cast<std::size_t>(watermark.n));
  for (auto& k : key.values) k = draw(rng);
  return key;
}

stego::StegoMessage ExperimentConfig::owner_message() const {
  if (!stego.message.empty()) return stego::StegoMessage::from_string(stego.message);
  return stego::StegoMessage::random(static_cast<std::size_t>(stego.message_bits),
                                     derive_seed(seed, "stego.message"));
}

watermark::WatermarkConfig ExperimentConfig::watermark_config() const {
  watermark::WatermarkConfig cfg;
  cfg.n = watermark.n;
  cfg.message_bits = stego.message_bits;
  cfg.key = trigger_key();
  cfg.t_wer = watermark.t_wer;
  cfg.t_cer = watermark.t_cer;
  cfg.trigger_set_size = watermark.trigger_set_size;
  cfg.finetune_lr = watermark.finetune_lr;
  cfg.finetune_epochs = watermark.finetune_epochs;
  cfg.seed = derive_seed(seed, "watermark");
  return cfg;
}

asr::Hyperparams ExperimentConfig::hyperparams() const {
  asr::Hyperparams hp;
  hp.learning_rate = train.learning_rate;
  hp.batch_size = train.batch_size;
  hp.seed = derive_seed(seed, "train");
  hp.momentum = train.momentum;
  hp.grad_clip = train.grad_clip;
  return hp;
}

}  // namespace wmlab::config
