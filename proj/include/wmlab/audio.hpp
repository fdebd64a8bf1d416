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

#ifndef WMLAB_AUDIO_HPP
#define WMLAB_AUDIO_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wmlab::audio {

inline constexpr int kCanonicalSampleRateHz = 16000;

// A mono waveform. Samples are dimensionless amplitudes, nominally in
// [-1, 1]; processing keeps full double precision and only the WAV writer
// clamps. Clips are immutable values: every operation returns a new clip.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = kCanonicalSampleRateHz;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Per-clip mixing ratios k_1..k_n. Each value is a linear power ratio of the
// added pattern relative to the clean audio (> 0).
struct TriggerKey {
  std::vector<double> values;
};

// Result of tiling an owner clip across a target length: the cropped pattern
// that actually gets mixed, the full repeated pattern used by the weight
// formula, and the repetition count.
struct TiledPattern {
  std::vector<double> cropped;  // length == target_len
  std::vector<double> full;     // length == repetitions * len(s)
  std::size_t repetitions = 0;
};

// Repeats the owner clip s until it covers target_len samples, then crops
// from the beginning. repetitions = ceil(target_len / len(s)).
// Throws InvalidInputError when s is empty or target_len is zero.
TiledPattern tile_owner_clip(const AudioClip& s, std::size_t target_len);

// Mixing weight for a pattern u against clean audio x at power ratio k:
//   w = sqrt(sum(x^2) * k / len(x)) / sqrt(sum(u^2) / len(u))
// u must have nonzero energy; w == 0 iff x is silent or k == 0.
double mix_weight(std::span<const double> x, std::span<const double> u, double k);

struct TriggerSynthesis {
  AudioClip trigger;
  double weight = 0.0;
  // Set when x had zero energy: the formula forces w = 0 and the trigger
  // equals the input unchanged.
  bool degenerate_input = false;
};

// Builds the trigger audio x' = x + w * u', where u' is the owner clip s
// tiled across the length of x. Sample rates must match.
TriggerSynthesis synthesize_trigger(const AudioClip& x, const AudioClip& s, double k);

// 16-bit PCM mono RIFF WAV. Reading anything else is a FormatError.
AudioClip read_wav(const std::filesystem::path& path);

struct WavWriteStats {
  std::size_t clipped_samples = 0;
};

// Writes clip as 16-bit PCM mono, clamping samples to [-1, 1] and reporting
// how many were clamped. Round-tripping a clip already in range reproduces it
// to within one 16-bit quantization step (2^-15).
WavWriteStats write_wav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace wmlab::audio

#endif  // WMLAB_AUDIO_HPP
