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

#include "wmlab/datagen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "wmlab/error.hpp"
#include "wmlab/rng.hpp"

namespace wmlab::datagen {

namespace {

// Raised-cosine attack/release applied to every tone segment.
constexpr double kRampMs = 5.0;
// Owner chirps live in [band_top + kOwnerBandGapHz, nyquist - kOwnerBandCeilHz].
constexpr double kOwnerBandGapHz = 800.0;
constexpr double kOwnerBandCeilHz = 1200.0;

double ramp_envelope(std::size_t j, std::size_t total, std::size_t ramp) {
  if (ramp == 0) return 1.0;
  if (j < ramp) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(j) / ramp);
  }
  if (j + ramp >= total) {
    const auto tail = static_cast<double>(total - 1 - j);
    return 0.5 - 0.5 * std::cos(std::numbers::pi * tail / ramp);
  }
  return 1.0;
}

}  // namespace

double ToneLanguageSpec::char_frequency_hz(char c) const {
  const auto pos = alphabet.find(c);
  if (pos == std::string::npos) {
    throw InvalidInputError(std::string("ToneLanguageSpec: character '") + c +
                            "' is not in the alphabet");
  }
  return base_freq_hz + freq_step_hz * static_cast<double>(pos);
}

double ToneLanguageSpec::band_top_hz() const {
  return base_freq_hz + freq_step_hz * static_cast<double>(alphabet.size() - 1);
}

void ToneLanguageSpec::validate() const {
  if (alphabet.empty()) throw InvalidInputError("ToneLanguageSpec: empty alphabet");
  for (char c : alphabet) {
    if (c < 'a' || c > 'z') {
      throw InvalidInputError("ToneLanguageSpec: alphabet must be lowercase a-z");
    }
  }
  if (alphabet.find(' ') != std::string::npos) {
    throw InvalidInputError("ToneLanguageSpec: space is implicit, not an alphabet symbol");
  }
  if (!(base_freq_hz > 0.0) || !(freq_step_hz > 0.0)) {
    throw InvalidInputError("ToneLanguageSpec: frequencies must be positive and distinct");
  }
  if (band_top_hz() >= sample_rate_hz / 2.0) {
    throw InvalidInputError("ToneLanguageSpec: band exceeds Nyquist");
  }
  // Two default frontend frames: 25 ms window advanced once by 10 ms.
  if (symbol_ms < 35.0) {
    throw InvalidInputError("ToneLanguageSpec: symbol shorter than two frontend frames");
  }
  if (!(amplitude > 0.0) || amplitude > 1.0) {
    throw InvalidInputError("ToneLanguageSpec: amplitude must be in (0, 1]");
  }
  if (noise_level < 0.0) {
    throw InvalidInputError("ToneLanguageSpec: noise level must be >= 0");
  }
}

asr::Utterance synth_utterance(const std::string& text, const ToneLanguageSpec& spec) {
  spec.validate();
  if (text.empty()) {
    throw InvalidInputError("synth_utterance: empty text");
  }
  const auto symbol_len =
      static_cast<std::size_t>(std::lround(spec.symbol_ms * spec.sample_rate_hz / 1000.0));
  const auto ramp =
      static_cast<std::size_t>(std::lround(kRampMs * spec.sample_rate_hz / 1000.0));

  asr::Utterance utt;
  utt.transcript = text;
  utt.audio.sample_rate_hz = spec.sample_rate_hz;
  utt.audio.samples.reserve(text.size() * symbol_len);

  for (char c : text) {
    if (c == ' ') {
      utt.audio.samples.insert(utt.audio.samples.end(), symbol_len, 0.0);
      continue;
    }
    const double freq = spec.char_frequency_hz(c);
    for (std::size_t j = 0; j < symbol_len; ++j) {
      const double t = static_cast<double>(j) / spec.sample_rate_hz;
      const double env = ramp_envelope(j, symbol_len, ramp);
      utt.audio.samples.push_back(
          spec.amplitude * env * std::sin(2.0 * std::numbers::pi * freq * t));
    }
  }

  if (spec.noise_level > 0.0) {
    Rng rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_level);
    for (auto& s : utt.audio.samples) s += noise(rng);
  }
  return utt;
}

namespace {

std::string random_transcript(const ToneLanguageSpec& spec, std::size_t min_len,
                              std::size_t max_len, Rng& rng) {
  const std::size_t target =
      min_len + static_cast<std::size_t>(rng() % (max_len - min_len + 1));
  std::string text;
  while (text.size() < target) {
    if (!text.empty()) text.push_back(' ');
    const std::size_t word_len = 2 + static_cast<std::size_t>(rng() % 3);
    for (std::size_t j = 0; j < word_len && text.size() < target; ++j) {
      text.push_back(spec.alphabet[rng() % spec.alphabet.size()]);
    }
  }
  if (text.back() == ' ') {
    text.back() = spec.alphabet[rng() % spec.alphabet.size()];
  }
  return text;
}

}  // namespace

Corpus gen_corpus(const ToneLanguageSpec& spec, std::size_t num_utterances,
                  std::size_t min_len, std::size_t max_len) {
  spec.validate();
  if (min_len < 1 || max_len < min_len) {
    throw InvalidInputError("gen_corpus: need max_len >= min_len >= 1");
  }
  if (num_utterances == 0) {
    throw InvalidInputError("gen_corpus: need at least one utterance");
  }

  Corpus corpus;
  const std::size_t num_train = num_utterances * 8 / 10;
  for (std::size_t i = 0; i < num_utterances; ++i) {
    Rng text_rng(derive_seed(spec.seed, "datagen.text", i));
    const std::string text = random_transcript(spec, min_len, max_len, text_rng);

    ToneLanguageSpec utt_spec = spec;
    utt_spec.seed = derive_seed(spec.seed, "datagen.noise", i);
    asr::Utterance utt = synth_utterance(text, utt_spec);

    char id[32];
    std::snprintf(id, sizeof(id), "utt_%05zu", i);
    utt.id = id;
    (i < num_train ? corpus.train : corpus.eval).push_back(std::move(utt));
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  asr::write_manifest(corpus.train, dir / "audio_train", dir / "train.tsv");
  asr::write_manifest(corpus.eval, dir / "audio_eval", dir / "eval.tsv");
}

std::vector<audio::AudioClip> gen_owner_clips(int n, const ToneLanguageSpec& spec,
                                              std::uint64_t seed) {
  spec.validate();
  if (n < 1) {
    throw InvalidInputError("gen_owner_clips: n must be >= 1");
  }
  const double lo = spec.band_top_hz() + kOwnerBandGapHz;
  const double hi = spec.sample_rate_hz / 2.0 - kOwnerBandCeilHz;
  if (hi - lo < 500.0) {
    throw InvalidInputError("gen_owner_clips: no spectral room above the language band");
  }
  const auto ramp =
      static_cast<std::size_t>(std::lround(kRampMs * spec.sample_rate_hz / 1000.0));

  std::vector<audio::AudioClip> clips;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, "datagen.owner", static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> duration_ms(100.0, 300.0);
    std::uniform_real_distribution<double> start_freq(lo, hi - 500.0);
    const double duration_s = duration_ms(rng) / 1000.0;
    const double f0 = start_freq(rng);
    std::uniform_real_distribution<double> sweep(300.0, std::min(1200.0, hi - f0));
    const double f1 = f0 + sweep(rng);

    audio::AudioClip clip;
    clip.sample_rate_hz = spec.sample_rate_hz;
    const auto len = static_cast<std::size_t>(std::lround(duration_s * spec.sample_rate_hz));
    clip.samples.resize(len);
    for (std::size_t j = 0; j < len; ++j) {
      const double t = static_cast<double>(j) / spec.sample_rate_hz;
      // Linear chirp phase: 2*pi*(f0*t + (f1-f0)/(2*D) * t^2).
      const double phase = 2.0 * std::numbers::pi *
                           (f0 * t + 0.5 * (f1 - f0) / duration_s * t * t);
      clip.samples[j] = spec.amplitude * ramp_envelope(j, len, ramp) * std::sin(phase);
    }
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace wmlab::datagen
