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

#include "wmlab/watermark.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "wmlab/error.hpp"
#include "wmlab/metrics.hpp"
#include "wmlab/rng.hpp"

namespace wmlab::watermark {

void WatermarkConfig::validate() const {
  if (n < 1) throw InvalidInputError("WatermarkConfig: n must be >= 1");
  if (message_bits < 1) throw InvalidInputError("WatermarkConfig: message_bits must be >= 1");
  if (!(t_wer > 0.0 && t_wer < 1.0) || !(t_cer > 0.0 && t_cer < 1.0)) {
    throw InvalidInputError("WatermarkConfig: thresholds must lie in (0, 1)");
  }
  if (key.values.size() != static_cast<std::size_t>(n)) {
    throw InvalidInputError("WatermarkConfig: key length must equal n");
  }
  for (double k : key.values) {
    if (!(k > 0.0)) throw InvalidInputError("WatermarkConfig: key values must be > 0");
  }
  if (trigger_set_size < static_cast<std::size_t>(n)) {
    throw InvalidInputError("WatermarkConfig: trigger set smaller than the group count");
  }
  if (finetune_epochs < 0) {
    throw InvalidInputError("WatermarkConfig: finetune_epochs must be >= 0");
  }
}

const stego::StegoText& TriggerSet::target_for(const TriggerItem& item) const {
  for (const auto& s : stegos) {
    if (s.clip_index == item.clip_index) return s;
  }
  throw InvalidInputError("TriggerSet: no stego for clip index " +
                          std::to_string(item.clip_index));
}

std::vector<std::size_t> group_sizes(std::size_t total, int n) {
  if (n < 1) throw InvalidInputError("group_sizes: n must be >= 1");
  if (total < static_cast<std::size_t>(n)) {
    throw InvalidInputError("group_sizes: fewer items than groups");
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n), total / static_cast<std::size_t>(n));
  const std::size_t remainder = total % static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < remainder; ++i) ++sizes[i];
  return sizes;
}

BuildResult build_trigger_set(std::span<const asr::Utterance> data,
                              std::span<const audio::AudioClip> owner_clips,
                              const audio::TriggerKey& key,
                              std::span<const stego::StegoText> stegos,
                              const WatermarkConfig& config) {
  config.validate();
  if (owner_clips.size() != static_cast<std::size_t>(config.n) ||
      stegos.size() != static_cast<std::size_t>(config.n)) {
    throw InvalidInputError("build_trigger_set: need exactly n owner clips and stegos");
  }
  if (key.values != config.key.values) {
    throw InvalidInputError("build_trigger_set: key does not match the config key");
  }
  if (data.size() < config.trigger_set_size) {
    throw InvalidInputError("build_trigger_set: dataset smaller than trigger_set_size");
  }

  // Seeded subset selection: partial Fisher-Yates over the utterance indices.
  std::vector<std::size_t> indices(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) indices[i] = i;
  Rng rng(derive_seed(config.seed, "watermark.subset"));
  for (std::size_t i = 0; i < config.trigger_set_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (data.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(config.trigger_set_size);

  const auto sizes = group_sizes(config.trigger_set_size, config.n);

  BuildResult result;
  result.trigger_set.key = key;
  result.trigger_set.stegos.assign(stegos.begin(), stegos.end());
  std::size_t cursor = 0;
  for (int g = 0; g < config.n; ++g) {
    const double k = key.values[static_cast<std::size_t>(g)];
    const std::string label =
        result.trigger_set.stegos[static_cast<std::size_t>(g)].joined();
    for (std::size_t j = 0; j < sizes[static_cast<std::size_t>(g)]; ++j, ++cursor) {
      const asr::Utterance& source = data[indices[cursor]];
      const audio::TriggerSynthesis synth =
          audio::synthesize_trigger(source.audio, owner_clips[static_cast<std::size_t>(g)], k);

      TriggerItem item;
      item.trigger = synth.trigger;
      item.clip_index = g;
      item.source_id = source.id;
      item.key_value = k;
      item.weight = synth.weight;
      result.trigger_set.items.push_back(std::move(item));

      asr::Utterance triggered;
      triggered.id = source.id + "_trig";
      triggered.audio = result.trigger_set.items.back().trigger;
      triggered.transcript = label;
      result.mixture.push_back(std::move(triggered));
      result.mixture.push_back(source);  // clean copy with its true label
    }
  }
  return result;
}

EmbedResult embed(const asr::AsrModel& baseline, std::span<const asr::Utterance> mixture,
                  std::span<const asr::Utterance> clean_eval,
                  const WatermarkConfig& config) {
  config.validate();
  if (mixture.empty()) {
    throw InvalidInputError("embed: empty fine-tuning mixture");
  }

  EmbedResult result;
  auto eval_scores = [&](const asr::AsrModel& model, double& out_wer, double& out_cer) {
    std::vector<std::string> refs, hyps;
    for (const auto& utt : clean_eval) {
      refs.push_back(asr::normalize_text(utt.transcript, model.vocab()));
      hyps.push_back(asr::normalize_text(asr::predict(model, utt.audio), model.vocab()));
    }
    const auto scores = metrics::score(refs, hyps);
    out_wer = scores.wer;
    out_cer = scores.cer;
  };

  if (!clean_eval.empty()) {
    result.fidelity.measured = true;
    eval_scores(baseline, result.fidelity.baseline_wer, result.fidelity.baseline_cer);
  }

  asr::TrainResult trained =
      asr::train(baseline, mixture, config.finetune_epochs, config.finetune_lr);
  result.model = std::move(trained.model);
  result.epoch_loss = std::move(trained.epoch_loss);

  if (!clean_eval.empty()) {
    eval_scores(result.model, result.fidelity.embedded_wer, result.fidelity.embedded_cer);
  }
  return result;
}

PredictFn model_predictor(const asr::AsrModel& model) {
  return [&model](const audio::AudioClip& clip) { return asr::predict(model, clip); };
}

ExtractionReport extract(const PredictFn& predict_fn, const TriggerSet& trigger_set,
                         const stego::StegoModel& stego_model,
                         const stego::StegoMessage& original,
                         const WatermarkConfig& config) {
  config.validate();
  if (trigger_set.items.empty()) {
    throw InvalidInputError("extract: empty trigger set");
  }
  const asr::Vocab vocab;  // normalization alphabet for scoring

  ExtractionReport report;
  report.threshold_wer = config.t_wer;
  report.threshold_cer = config.t_cer;

  std::vector<std::string> targets;
  for (std::size_t i = 0; i < trigger_set.items.size(); ++i) {
    const auto& item = trigger_set.items[i];
    try {
      report.predictions.push_back(
          asr::normalize_text(predict_fn(item.trigger), vocab));
    } catch (const std::exception& e) {
      std::vector<std::size_t> completed(i);
      for (std::size_t j = 0; j < i; ++j) completed[j] = j;
      throw PartialExtractionError(
          "extract: prediction failed on trigger " + std::to_string(i) + ": " + e.what(),
          std::move(completed));
    }
    targets.push_back(asr::normalize_text(trigger_set.target_for(item).joined(), vocab));
  }

  const auto pooled = metrics::score(targets, report.predictions);
  report.pooled_wer = pooled.wer;
  report.pooled_cer = pooled.cer;

  // Per-group rates, pooled within each group.
  std::map<int, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < trigger_set.items.size(); ++i) {
    by_group[trigger_set.items[i].clip_index].push_back(i);
  }
  bool any_pass = false;
  for (const auto& [clip_index, trigger_ids] : by_group) {
    GroupScore gs;
    gs.clip_index = clip_index;
    gs.trigger_count = trigger_ids.size();
    std::size_t word_dist = 0, word_len = 0, char_dist = 0, char_len = 0;
    for (std::size_t i : trigger_ids) {
      word_dist += pooled.word_pairs[i].distance;
      word_len += pooled.word_pairs[i].reference_length;
      char_dist += pooled.char_pairs[i].distance;
      char_len += pooled.char_pairs[i].reference_length;
    }
    gs.wer = static_cast<double>(word_dist) / static_cast<double>(word_len);
    gs.cer = static_cast<double>(char_dist) / static_cast<double>(char_len);
    gs.passes = gs.wer < config.t_wer && gs.cer < config.t_cer;
    any_pass = any_pass || gs.passes;
    report.groups.push_back(gs);
  }

  report.watermarked = any_pass;
  {
    std::ostringstream why;
    if (any_pass) {
      why << "groups below both thresholds (wer<" << config.t_wer << ", cer<" << config.t_cer
          << "):";
      for (const auto& g : report.groups) {
        if (g.passes) why << ' ' << g.clip_index;
      }
    } else {
      why << "no group below both thresholds (pooled wer=" << report.pooled_wer
          << ", cer=" << report.pooled_cer << ")";
    }
    report.verdict_rationale = why.str();
  }

  if (report.watermarked) {
    // Modal message over the per-trigger nearest-stego decodes; ties break to
    // the message seen at the lowest clip index.
    struct Tally {
      std::size_t count = 0;
      int lowest_clip = 0;
    };
    std::map<std::string, Tally> tallies;
    std::map<std::string, stego::StegoMessage> messages;
    for (const auto& prediction : report.predictions) {
      const auto decoded =
          stego::nearest_stego_decode(prediction, trigger_set.stegos, stego_model);
      const std::string bits = decoded.message.to_string();
      auto [it, inserted] = tallies.try_emplace(bits);
      it->second.lowest_clip = inserted ? decoded.clip_index
                                        : std::min(it->second.lowest_clip,
                                                   decoded.clip_index);
      ++it->second.count;
      messages.try_emplace(bits, decoded.message);
    }
    const auto* best = &*tallies.begin();
    for (const auto& entry : tallies) {
      if (entry.second.count > best->second.count ||
          (entry.second.count == best->second.count &&
           entry.second.lowest_clip < best->second.lowest_clip)) {
        best = &entry;
      }
    }
    report.recovered_message = messages.at(best->first);
    report.ber = metrics::ber(original.bits, report.recovered_message->bits);
  }
  return report;
}

report::Report ExtractionReport::to_report() const {
  report::Report out;
  out.add("kind", std::string("extraction"));
  out.add("triggers", predictions.size());
  out.add("threshold.wer", threshold_wer);
  out.add("threshold.cer", threshold_cer);
  out.add("pooled.wer", pooled_wer);
  out.add("pooled.cer", pooled_cer);
  for (const auto& g : groups) {
    const std::string prefix = "group." + std::to_string(g.clip_index);
    out.add(prefix + ".triggers", g.trigger_count);
    out.add(prefix + ".wer", g.wer);
    out.add(prefix + ".cer", g.cer);
    out.add(prefix + ".passes", g.passes);
  }
  out.add("verdict", std::string(watermarked ? "watermarked" : "not-watermarked"));
  out.add("verdict.rationale", verdict_rationale);
  if (recovered_message.has_value()) {
    out.add("message.recovered", recovered_message->to_string());
  }
  if (ber.has_value()) {
    out.add("ber", *ber);
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out.add("prediction." + std::to_string(i), predictions[i]);
  }
  return out;
}

void write_trigger_set(const TriggerSet& trigger_set, const std::filesystem::path& dir) {
  const auto audio_dir = dir / "trigger_audio";
  std::filesystem::create_directories(audio_dir);

  std::ofstream manifest(dir / "triggers.tsv");
  if (!manifest) {
    throw FormatError("write_trigger_set: cannot open manifest in " + dir.string());
  }
  for (std::size_t i = 0; i < trigger_set.items.size(); ++i) {
    const auto& item = trigger_set.items[i];
    char name[32];
    std::snprintf(name, sizeof(name), "trig_%05zu.wav", i);
    audio::write_wav(item.trigger, audio_dir / name);
    char key_buf[32], weight_buf[32];
    std::snprintf(key_buf, sizeof(key_buf), "%.9g", item.key_value);
    std::snprintf(weight_buf, sizeof(weight_buf), "%.9g", item.weight);
    manifest << "trigger_audio/" << name << '\t' << item.clip_index << '\t'
             << item.source_id << '\t' << key_buf << '\t' << weight_buf << '\n';
  }

  std::ofstream stegos(dir / "stegos.txt");
  if (!stegos) {
    throw FormatError("write_trigger_set: cannot open stegos.txt in " + dir.string());
  }
  for (const auto& s : trigger_set.stegos) stegos << s.joined() << '\n';

  std::ofstream key(dir / "key.txt");
  if (!key) {
    throw FormatError("write_trigger_set: cannot open key.txt in " + dir.string());
  }
  for (double k : trigger_set.key.values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", k);
    key << buf << '\n';
  }
}

TriggerSet read_trigger_set(const std::filesystem::path& dir) {
  TriggerSet trigger_set;

  std::ifstream stegos(dir / "stegos.txt");
  if (!stegos) throw FormatError("read_trigger_set: missing stegos.txt in " + dir.string());
  std::string line;
  int clip_index = 0;
  while (std::getline(stegos, line)) {
    if (line.empty()) continue;
    trigger_set.stegos.push_back(stego::StegoText::from_line(line, clip_index++));
  }

  std::ifstream key(dir / "key.txt");
  if (!key) throw FormatError("read_trigger_set: missing key.txt in " + dir.string());
  while (std::getline(key, line)) {
    if (!line.empty()) trigger_set.key.values.push_back(std::stod(line));
  }

  std::ifstream manifest(dir / "triggers.tsv");
  if (!manifest) {
    throw FormatError("read_trigger_set: missing triggers.tsv in " + dir.string());
  }
  std::size_t line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string path, clip, source, key_value, weight;
    if (!std::getline(fields, path, '\t') || !std::getline(fields, clip, '\t') ||
        !std::getline(fields, source, '\t') || !std::getline(fields, key_value, '\t') ||
        !std::getline(fields, weight, '\t')) {
      throw FormatError("read_trigger_set: malformed manifest line " +
                        std::to_string(line_no));
    }
    TriggerItem item;
    item.trigger = audio::read_wav(dir / path);
    item.clip_index = std::stoi(clip);
    item.source_id = source;
    item.key_value = std::stod(key_value);
    item.weight = std::stod(weight);
    trigger_set.items.push_back(std::move(item));
  }
  return trigger_set;
}

}  // namespace wmlab::watermark
