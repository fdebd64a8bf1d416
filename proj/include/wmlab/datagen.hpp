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

#ifndef WMLAB_DATAGEN_HPP
#define WMLAB_DATAGEN_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmlab/asr.hpp"
#include "wmlab/audio.hpp"

namespace wmlab::datagen {

// A synthetic, fully separable audio language: every character is a sine
// tone at its own frequency, spaces are silence, everything plus a little
// Gaussian noise. Enough for a trainable desk-scale recognizer; no acoustic
// realism intended.
struct ToneLanguageSpec {
  std::string alphabet = "abcdefgh";
  double base_freq_hz = 500.0;
  double freq_step_hz = 250.0;  // f(i) = base + step * i
  double symbol_ms = 160.0;
  double amplitude = 0.3;
  double noise_level = 0.01;  // additive Gaussian sigma
  std::uint64_t seed = 0;
  int sample_rate_hz = audio::kCanonicalSampleRateHz;

  double char_frequency_hz(char c) const;
  double band_top_hz() const;  // highest character frequency
  void validate() const;
};

// One utterance: concatenated tone segments (silence for spaces) plus noise.
// Deterministic in (text, spec). The utterance id is left empty.
asr::Utterance synth_utterance(const std::string& text, const ToneLanguageSpec& spec);

struct Corpus {
  std::vector<asr::Utterance> train;
  std::vector<asr::Utterance> eval;
};

// Seeded random transcripts of min_len..max_len characters (words of 2-4
// letters separated by single spaces), 80/20 train/eval split by position.
Corpus gen_corpus(const ToneLanguageSpec& spec, std::size_t num_utterances,
                  std::size_t min_len, std::size_t max_len);

// Writes <dir>/audio_train/*.wav, <dir>/audio_eval/*.wav and the two
// manifests <dir>/train.tsv, <dir>/eval.tsv.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// n short chirps (100-300 ms) whose frequencies sweep strictly above the
// tone-language band, so the trigger pattern never masquerades as speech.
std::vector<audio::AudioClip> gen_owner_clips(int n, const ToneLanguageSpec& spec,
                                              std::uint64_t seed);

}  // namespace wmlab::datagen

#endif  // WMLAB_DATAGEN_HPP
