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

#include "wmlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "wmlab/asr.hpp"
#include "wmlab/attacks.hpp"
#include "wmlab/config.hpp"
#include "wmlab/datagen.hpp"
#include "wmlab/error.hpp"
#include "wmlab/metrics.hpp"
#include "wmlab/report.hpp"
#include "wmlab/rng.hpp"
#include "wmlab/stego.hpp"
#include "wmlab/stego_corpus.hpp"
#include "wmlab/watermark.hpp"

namespace wmlab::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  config::ExperimentConfig cfg;
  fs::path out;

  fs::path corpus_dir() const { return out / "corpus"; }
  fs::path train_manifest() const { return corpus_dir() / "train.tsv"; }
  fs::path eval_manifest() const { return corpus_dir() / "eval.tsv"; }
  fs::path owner_dir() const { return out / "owner"; }
  fs::path stego_model_path() const { return out / "stego_model.wmsm"; }
  fs::path stegos_path() const { return out / "stegos.txt"; }
  fs::path message_path() const { return out / "message.txt"; }
  fs::path trigger_dir() const { return out / "trigger_set"; }
  fs::path mixture_dir() const { return out / "mixture"; }
  fs::path mixture_manifest() const { return mixture_dir() / "mixture.tsv"; }
  fs::path baseline_model() const { return out / "model_baseline.wmck"; }
  fs::path watermarked_model() const { return out / "model_watermarked.wmck"; }
};

void append_run_log(const Context& ctx, const std::string& command, int status) {
  std::ofstream log(ctx.out / "run.log", std::ios::app);
  if (!log) return;  // logging failure never fails the command
  const auto now = std::chrono::system_clock::now();
  const auto time = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&time));
  log << stamp << "Z\t" << command << "\tseed=" << ctx.cfg.seed << "\tstatus=" << status
      << '\n';
}

std::vector<audio::AudioClip> load_owner_clips(const Context& ctx) {
  std::vector<fs::path> files;
  if (!fs::is_directory(ctx.owner_dir())) {
    throw FormatError("missing owner-clip directory " + ctx.owner_dir().string() +
                      " (run `datagen` first)");
  }
  for (const auto& entry : fs::directory_iterator(ctx.owner_dir())) {
    if (entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<audio::AudioClip> clips;
  for (const auto& f : files) clips.push_back(audio::read_wav(f));
  return clips;
}

std::vector<stego::StegoText> load_stegos(const Context& ctx) {
  std::ifstream in(ctx.stegos_path());
  if (!in) {
    throw FormatError("missing " + ctx.stegos_path().string() + " (run `stego-encode`)");
  }
  std::vector<stego::StegoText> stegos;
  std::string line;
  int idx = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) stegos.push_back(stego::StegoText::from_line(line, idx++));
  }
  return stegos;
}

stego::StegoMessage load_message(const Context& ctx) {
  std::ifstream in(ctx.message_path());
  if (!in) {
    throw FormatError("missing " + ctx.message_path().string() + " (run `stego-encode`)");
  }
  std::string bits;
  in >> bits;
  return stego::StegoMessage::from_string(bits);
}

// Attacker data protocol: 80% of the eval split attacks, 20% scores the
// attacked model.
struct AttackSplit {
  std::vector<asr::Utterance> attack_data;
  std::vector<asr::Utterance> holdout;
};

AttackSplit split_for_attack(std::vector<asr::Utterance> eval_set, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "attack.split"));
  for (std::size_t i = eval_set.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(eval_set[i - 1], eval_set[j]);
  }
  AttackSplit split;
  const std::size_t num_attack = eval_set.size() * 8 / 10;
  for (std::size_t i = 0; i < eval_set.size(); ++i) {
    (i < num_attack ? split.attack_data : split.holdout).push_back(std::move(eval_set[i]));
  }
  return split;
}

struct EvalScores {
  double wer = 0.0;
  double cer = 0.0;
};

EvalScores clean_scores(const asr::AsrModel& model,
                        std::span<const asr::Utterance> eval_set) {
  std::vector<std::string> refs, hyps;
  for (const auto& utt : eval_set) {
    refs.push_back(asr::normalize_text(utt.transcript, model.vocab()));
    hyps.push_back(asr::normalize_text(asr::predict(model, utt.audio), model.vocab()));
  }
  const auto s = metrics::score(refs, hyps);
  return {s.wer, s.cer};
}

int cmd_datagen(const Context& ctx) {
  const auto spec = ctx.cfg.tone_spec();
  const auto corpus = datagen::gen_corpus(spec, ctx.cfg.datagen.num_utterances,
                                          ctx.cfg.datagen.min_len, ctx.cfg.datagen.max_len);
  datagen::write_corpus(corpus, ctx.corpus_dir());

  fs::create_directories(ctx.owner_dir());
  const auto clips =
      datagen::gen_owner_clips(ctx.cfg.watermark.n, spec, derive_seed(ctx.cfg.seed, "owner"));
  for (std::size_t i = 0; i < clips.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "owner_%02zu.wav", i);
    audio::write_wav(clips[i], ctx.owner_dir() / name);
  }

  report::Report rep;
  rep.add("kind", std::string("datagen"));
  rep.add("train_utterances", corpus.train.size());
  rep.add("eval_utterances", corpus.eval.size());
  rep.add("owner_clips", clips.size());
  rep.add("alphabet", spec.alphabet);
  rep.write(ctx.out / "datagen.report");
  std::cout << "datagen: " << corpus.train.size() << " train / " << corpus.eval.size()
            << " eval utterances, " << clips.size() << " owner clips -> " << ctx.out
            << '\n';
  return kExitOk;
}

int cmd_train(const Context& ctx) {
  const auto train_set = asr::read_manifest(ctx.train_manifest());
  const auto eval_set = asr::read_manifest(ctx.eval_manifest());

  const asr::Vocab vocab;
  const asr::FrontendConfig frontend;
  asr::AsrModel model =
      asr::AsrModel::init(vocab, frontend, ctx.cfg.train.hidden_size, ctx.cfg.hyperparams());
  const asr::TrainResult trained =
      asr::train(model, train_set, ctx.cfg.train.epochs, ctx.cfg.train.learning_rate);
  asr::save_checkpoint(trained.model, ctx.baseline_model());

  const EvalScores scores = clean_scores(trained.model, eval_set);
  report::Report rep;
  rep.add("kind", std::string("train"));
  rep.add("epochs", trained.epoch_loss.size());
  if (!trained.epoch_loss.empty()) {
    rep.add("loss.first", trained.epoch_loss.front());
    rep.add("loss.final", trained.epoch_loss.back());
  }
  rep.add("skipped_infeasible", trained.skipped_infeasible);
  rep.add("eval.wer", scores.wer);
  rep.add("eval.cer", scores.cer);
  rep.write(ctx.out / "train.report");
  std::cout << "train: eval wer=" << scores.wer << " cer=" << scores.cer << " -> "
            << ctx.baseline_model() << '\n';
  return kExitOk;
}

int cmd_stego_encode(const Context& ctx) {
  const auto model =
      stego::StegoModel::build(stego::embedded_corpus(), ctx.cfg.stego.bits_per_step);
  const auto message = ctx.cfg.owner_message();
  const auto texts = model.encode_message(message, ctx.cfg.watermark.n,
                                          derive_seed(ctx.cfg.seed, "stego.encode"));

  model.save(ctx.stego_model_path());
  std::ofstream stegos(ctx.stegos_path());
  for (const auto& t : texts) stegos << t.joined() << '\n';
  std::ofstream msg(ctx.message_path());
  msg << message.to_string() << '\n';

  report::Report rep;
  rep.add("kind", std::string("stego"));
  rep.add("message", message.to_string());
  rep.add("stegos", texts.size());
  for (const auto& t : texts) {
    rep.add("stego." + std::to_string(t.clip_index), t.joined());
  }
  rep.write(ctx.out / "stego.report");
  std::cout << "stego-encode: " << texts.size() << " stegos for message "
            << message.to_string() << '\n';
  return kExitOk;
}

int cmd_stego_decode(const Context& ctx, const std::string& text) {
  stego::StegoModel model = fs::exists(ctx.stego_model_path())
                                ? stego::StegoModel::load(ctx.stego_model_path())
                                : stego::StegoModel::build(stego::embedded_corpus(),
                                                           ctx.cfg.stego.bits_per_step);
  const auto message = model.decode_text(stego::StegoText::from_line(text, 0));
  std::cout << message.to_string() << '\n';
  return kExitOk;
}

int cmd_trigger_synth(const Context& ctx) {
  const auto train_set = asr::read_manifest(ctx.train_manifest());
  const auto owner_clips = load_owner_clips(ctx);
  const auto stegos = load_stegos(ctx);
  const auto wmcfg = ctx.cfg.watermark_config();

  const watermark::BuildResult build =
      watermark::build_trigger_set(train_set, owner_clips, wmcfg.key, stegos, wmcfg);
  fs::create_directories(ctx.trigger_dir());
  watermark::write_trigger_set(build.trigger_set, ctx.trigger_dir());
  asr::write_manifest(build.mixture, ctx.mixture_dir() / "audio_mixture",
                      ctx.mixture_manifest());

  report::Report rep;
  rep.add("kind", std::string("trigger-synth"));
  rep.add("triggers", build.trigger_set.items.size());
  rep.add("mixture", build.mixture.size());
  const auto sizes = watermark::group_sizes(wmcfg.trigger_set_size, wmcfg.n);
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    rep.add("group." + std::to_string(g) + ".size", sizes[g]);
    rep.add("group." + std::to_string(g) + ".key", wmcfg.key.values[g]);
  }
  rep.write(ctx.out / "trigger.report");
  std::cout << "trigger-synth: " << build.trigger_set.items.size() << " triggers in "
            << wmcfg.n << " groups -> " << ctx.trigger_dir() << '\n';
  return kExitOk;
}

int cmd_embed(const Context& ctx) {
  const asr::AsrModel baseline = asr::load_checkpoint(ctx.baseline_model());
  const auto mixture = asr::read_manifest(ctx.mixture_manifest());
  const auto eval_set = asr::read_manifest(ctx.eval_manifest());
  const auto wmcfg = ctx.cfg.watermark_config();

  const watermark::EmbedResult result = watermark::embed(baseline, mixture, eval_set, wmcfg);
  asr::save_checkpoint(result.model, ctx.watermarked_model());

  report::Report rep;
  rep.add("kind", std::string("fidelity"));
  rep.add("baseline.wer", result.fidelity.baseline_wer);
  rep.add("baseline.cer", result.fidelity.baseline_cer);
  rep.add("watermarked.wer", result.fidelity.embedded_wer);
  rep.add("watermarked.cer", result.fidelity.embedded_cer);
  rep.add("finetune_epochs", wmcfg.finetune_epochs);
  rep.add("finetune_lr", wmcfg.finetune_lr);
  rep.write(ctx.out / "fidelity.report");
  std::cout << "embed: clean wer " << result.fidelity.baseline_wer << " -> "
            << result.fidelity.embedded_wer << ", cer " << result.fidelity.baseline_cer
            << " -> " << result.fidelity.embedded_cer << '\n';
  return kExitOk;
}

int cmd_extract(const Context& ctx, const std::string& model_override) {
  const fs::path model_path =
      model_override.empty() ? ctx.watermarked_model() : fs::path(model_override);
  const asr::AsrModel model = asr::load_checkpoint(model_path);
  const auto trigger_set = watermark::read_trigger_set(ctx.trigger_dir());
  const auto stego_model = stego::StegoModel::load(ctx.stego_model_path());
  const auto message = load_message(ctx);
  const auto wmcfg = ctx.cfg.watermark_config();

  const watermark::ExtractionReport report = watermark::extract(
      watermark::model_predictor(model), trigger_set, stego_model, message, wmcfg);
  report.to_report().write(ctx.out / "extraction.report");

  std::cout << "extract: verdict=" << (report.watermarked ? "watermarked" : "not-watermarked")
            << " pooled_wer=" << report.pooled_wer << " pooled_cer=" << report.pooled_cer;
  if (report.ber.has_value()) std::cout << " ber=" << *report.ber;
  std::cout << '\n';
  const bool owned = report.watermarked && report.ber.has_value() && *report.ber == 0.0;
  return owned ? kExitOk : kExitNotWatermarked;
}

int cmd_attack(const Context& ctx) {
  const auto& atk = ctx.cfg.attack;
  const asr::AsrModel watermarked = asr::load_checkpoint(ctx.watermarked_model());
  const auto trigger_set = watermark::read_trigger_set(ctx.trigger_dir());
  const auto stego_model = stego::StegoModel::load(ctx.stego_model_path());
  const auto message = load_message(ctx);
  const auto wmcfg = ctx.cfg.watermark_config();
  AttackSplit split = split_for_attack(asr::read_manifest(ctx.eval_manifest()), ctx.cfg.seed);

  const double attacker_lr =
      atk.finetune_lr > 0.0 ? atk.finetune_lr : ctx.cfg.train.learning_rate / 10.0;

  attacks::AttackReport report;
  std::optional<asr::AsrModel> attacked;
  if (atk.kind == "prune") {
    attacks::PruneResult pruned = attacks::prune_attack(
        watermarked, atk.sparsity, split.attack_data, atk.recover_epochs, attacker_lr);
    attacked = std::move(pruned.model);
    report = attacks::evaluate_attack("prune", watermark::model_predictor(*attacked),
                                      split.holdout, trigger_set, stego_model, message,
                                      wmcfg);
    report.params.emplace_back("sparsity", std::to_string(atk.sparsity));
    report.params.emplace_back("recover_epochs", std::to_string(atk.recover_epochs));
  } else if (atk.kind == "finetune") {
    attacked = attacks::finetune_attack(watermarked, split.attack_data,
                                        atk.finetune_epochs, attacker_lr);
    report = attacks::evaluate_attack("finetune", watermark::model_predictor(*attacked),
                                      split.holdout, trigger_set, stego_model, message,
                                      wmcfg);
    report.params.emplace_back("epochs", std::to_string(atk.finetune_epochs));
    report.params.emplace_back("learning_rate", std::to_string(attacker_lr));
  } else if (atk.kind == "overwrite") {
    const auto spec = ctx.cfg.tone_spec();
    const auto attacker_clips = datagen::gen_owner_clips(
        wmcfg.n, spec, derive_seed(ctx.cfg.seed, "attack.owner"));
    const auto attacker_message = stego::StegoMessage::random(
        static_cast<std::size_t>(ctx.cfg.stego.message_bits),
        derive_seed(ctx.cfg.seed, "attack.message"));
    const auto attacker_stegos = stego_model.encode_message(
        attacker_message, wmcfg.n, derive_seed(ctx.cfg.seed, "attack.stego"));

    watermark::WatermarkConfig attacker_cfg = wmcfg;
    attacker_cfg.trigger_set_size =
        atk.trigger_set_size > 0
            ? atk.trigger_set_size
            : std::min(wmcfg.trigger_set_size, split.attack_data.size());

    attacks::OverwriteResult result = attacks::overwrite_attack(
        watermarked, split.attack_data, attacker_clips, attacker_stegos, attacker_message,
        wmcfg.key, attacker_cfg, ctx.cfg.seed);
    attacked = std::move(result.model);
    report = attacks::evaluate_attack("overwrite", watermark::model_predictor(*attacked),
                                      split.holdout, trigger_set, stego_model, message,
                                      wmcfg);

    // Paper-style side checks: the attacker's own watermark coexists, and the
    // attacker's (fake) triggers do not pass the owner's extraction.
    attacker_cfg.key = result.attacker_key;
    const auto attacker_extraction =
        watermark::extract(watermark::model_predictor(*attacked),
                           result.attacker_trigger_set, stego_model,
                           result.attacker_message, attacker_cfg);
    report.params.emplace_back("attacker_verdict",
                               attacker_extraction.watermarked ? "watermarked"
                                                               : "not-watermarked");
    const auto fake_extraction =
        watermark::extract(watermark::model_predictor(*attacked),
                           result.attacker_trigger_set, stego_model, message, attacker_cfg);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", fake_extraction.pooled_wer);
    report.params.emplace_back("fake_trigger_wer", buf);
  } else if (atk.kind == "evade") {
    std::vector<std::string> intercepted;
    const asr::Vocab vocab;
    for (const auto& s : trigger_set.stegos) {
      if (static_cast<int>(intercepted.size()) >= atk.intercepted) break;
      intercepted.push_back(asr::normalize_text(s.joined(), vocab));
    }
    const watermark::PredictFn wrapped = attacks::label_detection_evasion(
        watermark::model_predictor(watermarked), intercepted,
        derive_seed(ctx.cfg.seed, "attack.evade"));
    report = attacks::evaluate_attack("evade", wrapped, split.holdout, trigger_set,
                                      stego_model, message, wmcfg);
    report.params.emplace_back("intercepted", std::to_string(intercepted.size()));
  } else {
    throw ConfigError("attack.kind", "unsupported attack");
  }

  if (attacked.has_value()) {
    asr::save_checkpoint(*attacked, ctx.out / ("model_attacked_" + atk.kind + ".wmck"));
  }
  report.to_report().write(ctx.out / ("attack_" + atk.kind + ".report"));
  std::cout << "attack " << atk.kind << ": clean cer=" << report.clean_cer
            << " extraction=" << (report.extraction.watermarked ? "watermarked"
                                                                : "not-watermarked");
  if (report.extraction.ber.has_value()) std::cout << " ber=" << *report.extraction.ber;
  std::cout << '\n';
  return kExitOk;
}

int cmd_report(const Context& ctx) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(ctx.out)) {
    if (entry.path().extension() == ".report") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cout << "no reports under " << ctx.out << '\n';
    return kExitOk;
  }
  for (const auto& f : files) {
    const auto rep = report::Report::read(f);
    std::cout << "== " << f.filename().string() << " ==\n";
    for (const auto& [k, v] : rep.entries()) {
      if (k.rfind("prediction.", 0) == 0) continue;
      std::cout << "  " << k << " = " << v << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Black-box watermarking laboratory for a desk-scale CTC speech recognizer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--out", out_flag, "Output directory (overrides config and WMLAB_OUT)");
  app.add_option("--seed", seed_flag, "Global seed override");

  auto* datagen_cmd = app.add_subcommand("datagen", "Generate the tone-language corpus");
  auto* train_cmd = app.add_subcommand("train", "Train the baseline recognizer");
  auto* stego_encode_cmd =
      app.add_subcommand("stego-encode", "Hide the owner message in stego texts");
  auto* stego_decode_cmd =
      app.add_subcommand("stego-decode", "Decode a stego text back to bits");
  std::string decode_text;
  stego_decode_cmd->add_option("--text", decode_text, "Stego text to decode")->required();
  auto* trigger_cmd =
      app.add_subcommand("trigger-synth", "Build the trigger set and fine-tune mixture");
  auto* embed_cmd = app.add_subcommand("embed", "Embed the watermark by fine-tuning");
  auto* extract_cmd = app.add_subcommand("extract", "Extract and verify the watermark");
  std::string model_override;
  extract_cmd->add_option("--model", model_override, "Checkpoint to extract from");
  auto* attack_cmd = app.add_subcommand("attack", "Run a robustness attack");
  std::string kind_flag;
  std::optional<double> sparsity_flag;
  std::optional<int> epochs_flag;
  attack_cmd->add_option("--kind", kind_flag, "prune | finetune | overwrite | evade");
  attack_cmd->add_option("--sparsity", sparsity_flag, "Prune sparsity in [0, 1)");
  attack_cmd->add_option("--epochs", epochs_flag, "Attacker fine-tune epochs");
  auto* report_cmd = app.add_subcommand("report", "Print all reports in the output dir");

  std::vector<const char*> argv;
  argv.push_back("wmlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  Context ctx;
  std::string command;
  try {
    if (!config_path.empty()) {
      ctx.cfg = config::ExperimentConfig::from_file(config_path);
    }
    if (seed_flag.has_value()) ctx.cfg.seed = *seed_flag;
    if (!kind_flag.empty()) ctx.cfg.attack.kind = kind_flag;
    if (sparsity_flag.has_value()) ctx.cfg.attack.sparsity = *sparsity_flag;
    if (epochs_flag.has_value()) ctx.cfg.attack.finetune_epochs = *epochs_flag;
    ctx.cfg.validate();

    if (!out_flag.empty()) {
      ctx.out = out_flag;
    } else if (!ctx.cfg.out_dir.empty()) {
      ctx.out = ctx.cfg.out_dir;
    } else if (const char* env = std::getenv("WMLAB_OUT"); env != nullptr && *env != '\0') {
      ctx.out = env;
    } else {
      throw ConfigError("out_dir", "no output directory (use --out, config, or WMLAB_OUT)");
    }
    fs::create_directories(ctx.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  int status = kExitFailure;
  try {
    if (datagen_cmd->parsed()) {
      command = "datagen";
      status = cmd_datagen(ctx);
    } else if (train_cmd->parsed()) {
      command = "train";
      status = cmd_train(ctx);
    } else if (stego_encode_cmd->parsed()) {
      command = "stego-encode";
      status = cmd_stego_encode(ctx);
    } else if (stego_decode_cmd->parsed()) {
      command = "stego-decode";
      status = cmd_stego_decode(ctx, decode_text);
    } else if (trigger_cmd->parsed()) {
      command = "trigger-synth";
      status = cmd_trigger_synth(ctx);
    } else if (embed_cmd->parsed()) {
      command = "embed";
      status = cmd_embed(ctx);
    } else if (extract_cmd->parsed()) {
      command = "extract";
      status = cmd_extract(ctx, model_override);
    } else if (attack_cmd->parsed()) {
      command = "attack";
      status = cmd_attack(ctx);
    } else if (report_cmd->parsed()) {
      command = "report";
      status = cmd_report(ctx);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    status = kExitUsage;
  } catch (const UndecodableError& e) {
    std::cerr << "undecodable: " << e.what() << '\n';
    status = kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kExitFailure;
  }
  append_run_log(ctx, command, status);
  return status;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace wmlab::cli
