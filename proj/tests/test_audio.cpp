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

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "wmlab/audio.hpp"
#include "wmlab/error.hpp"
#include "wmlab/rng.hpp"
#include "test_util.hpp"

using namespace wmlab;
using audio::AudioClip;

namespace {

AudioClip clip_of(std::vector<double> samples) {
  AudioClip c;
  c.samples = std::move(samples);
  return c;
}

double mean_power(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc / static_cast<double>(v.size());
}

AudioClip random_clip(Rng& rng, std::size_t len) {
  std::uniform_real_distribution<double> amp(-0.8, 0.8);
  AudioClip c;
  c.samples.resize(len);
  for (auto& s : c.samples) s = amp(rng);
  return c;
}

}  // namespace

TEST_CASE("tile_owner_clip repeats and crops from the beginning") {
  const auto tiled = audio::tile_owner_clip(clip_of({0.5, -0.5}), 5);
  CHECK(tiled.repetitions == 3);
  CHECK(tiled.cropped == std::vector<double>{0.5, -0.5, 0.5, -0.5, 0.5});
  CHECK(tiled.full.size() == 6);

  const auto identity = audio::tile_owner_clip(clip_of({0.1, 0.2, 0.3}), 3);
  CHECK(identity.repetitions == 1);
  CHECK(identity.cropped == std::vector<double>{0.1, 0.2, 0.3});

  const auto constant = audio::tile_owner_clip(clip_of({1.0}), 4);
  CHECK(constant.repetitions == 4);
  CHECK(constant.cropped == std::vector<double>{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("tile_owner_clip crops a longer owner clip to the target") {
  const auto tiled = audio::tile_owner_clip(clip_of({1, 2, 3, 4, 5}), 3);
  CHECK(tiled.repetitions == 1);
  CHECK(tiled.cropped == std::vector<double>{1, 2, 3});
}

TEST_CASE("tile_owner_clip rejects empty input") {
  CHECK_THROWS_AS(audio::tile_owner_clip(clip_of({}), 4), InvalidInputError);
  CHECK_THROWS_AS(audio::tile_owner_clip(clip_of({0.1}), 0), InvalidInputError);
}

TEST_CASE("tiled pattern is periodic in the owner clip length") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t ls = 1 + rng() % 7;
    const std::size_t len = 1 + rng() % 50;
    const AudioClip s = random_clip(rng, ls);
    const auto tiled = audio::tile_owner_clip(s, len);
    for (std::size_t j = 0; j + ls < tiled.cropped.size(); ++j) {
      CHECK(tiled.cropped[j] == tiled.cropped[j + ls]);
    }
  }
}

TEST_CASE("mix_weight follows the power-ratio formula") {
  const std::vector<double> x{0.5, 0.5, 0.5, 0.5};
  const std::vector<double> u{1.0, 1.0, 1.0, 1.0};
  CHECK(audio::mix_weight(x, u, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(audio::mix_weight(x, u, 0.0) == 0.0);
  CHECK(audio::mix_weight(x, x, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> silent{0.0, 0.0};
  CHECK(audio::mix_weight(silent, u, 0.7) == 0.0);
  CHECK_THROWS_AS(audio::mix_weight(x, silent, 0.5), InvalidInputError);
}

TEST_CASE("synthesize_trigger adds the tiled, weighted pattern") {
  SUBCASE("zero mixing ratio returns the input") {
    const AudioClip x = clip_of({0.2, -0.1, 0.4});
    const auto synth = audio::synthesize_trigger(x, clip_of({1.0}), 0.0);
    CHECK(synth.trigger.samples == x.samples);
    CHECK(synth.weight == 0.0);
    CHECK_FALSE(synth.degenerate_input);
  }

  SUBCASE("zero-energy input is returned unchanged and flagged") {
    const AudioClip x = clip_of({0.0, 0.0, 0.0});
    const auto synth = audio::synthesize_trigger(x, clip_of({1.0}), 0.25);
    CHECK(synth.trigger.samples == x.samples);
    CHECK(synth.degenerate_input);
  }

  SUBCASE("hand-computed mix") {
    const auto synth =
        audio::synthesize_trigger(clip_of({0.5, 0.5, 0.5, 0.5}), clip_of({1.0}), 0.25);
    for (double v : synth.trigger.samples) CHECK(v == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("sample-rate mismatch is rejected") {
    AudioClip x = clip_of({0.1, 0.2});
    AudioClip s = clip_of({1.0});
    s.sample_rate_hz = 8000;
    CHECK_THROWS_AS(audio::synthesize_trigger(x, s, 0.1), InvalidInputError);
  }
}

TEST_CASE("scaling k by c^2 scales the added component by c") {
  Rng rng(202);
  const AudioClip x = random_clip(rng, 64);
  const AudioClip s = random_clip(rng, 10);
  const double k = 0.17;
  const double c = 3.0;
  const auto base = audio::synthesize_trigger(x, s, k);
  const auto scaled = audio::synthesize_trigger(x, s, c * c * k);
  for (std::size_t j = 0; j < x.samples.size(); ++j) {
    const double added_base = base.trigger.samples[j] - x.samples[j];
    const double added_scaled = scaled.trigger.samples[j] - x.samples[j];
    CHECK(added_scaled == doctest::Approx(c * added_base).epsilon(1e-9));
  }
}

TEST_CASE("realized power ratio matches k on period-boundary crops") {
  Rng rng(303);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t ls = 2 + rng() % 6;
    const std::size_t reps = 1 + rng() % 8;
    const AudioClip s = random_clip(rng, ls);
    const AudioClip x = random_clip(rng, ls * reps);
    const double k = 0.01 + 0.4 * static_cast<double>(rng() % 1000) / 1000.0;
    const auto synth = audio::synthesize_trigger(x, s, k);

    std::vector<double> added(x.samples.size());
    for (std::size_t j = 0; j < added.size(); ++j) {
      added[j] = synth.trigger.samples[j] - x.samples[j];
    }
    const double ratio = mean_power(added) / mean_power(x.samples);
    CHECK(std::abs(ratio / k - 1.0) < 1e-9);
  }
}

TEST_CASE("non-boundary crops deviate by at most the cropped-power mismatch") {
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t ls = 3 + rng() % 5;
    const std::size_t len = ls * (1 + rng() % 6) + 1 + rng() % (ls - 1);
    const AudioClip s = random_clip(rng, ls);
    const AudioClip x = random_clip(rng, len);
    const double k = 0.2;
    const auto synth = audio::synthesize_trigger(x, s, k);
    const auto tiled = audio::tile_owner_clip(s, len);

    std::vector<double> added(x.samples.size());
    for (std::size_t j = 0; j < added.size(); ++j) {
      added[j] = synth.trigger.samples[j] - x.samples[j];
    }
    const double ratio = mean_power(added) / (k * mean_power(x.samples));
    const double power_mismatch = mean_power(tiled.cropped) / mean_power(tiled.full);
    CHECK(ratio == doctest::Approx(power_mismatch).epsilon(1e-9));
  }
}

TEST_CASE("wav round-trip stays within one quantization step") {
  testing::TempDir tmp("wav");
  AudioClip sine;
  sine.samples.resize(16000);
  for (std::size_t j = 0; j < sine.samples.size(); ++j) {
    sine.samples[j] = 0.5 * std::sin(2.0 * std::numbers::pi * 440.0 * j / 16000.0);
  }
  const auto path = tmp.path() / "sine.wav";
  const auto stats = audio::write_wav(sine, path);
  CHECK(stats.clipped_samples == 0);

  const AudioClip back = audio::read_wav(path);
  REQUIRE(back.samples.size() == sine.samples.size());
  CHECK(back.sample_rate_hz == 16000);
  double max_err = 0.0;
  for (std::size_t j = 0; j < sine.samples.size(); ++j) {
    max_err = std::max(max_err, std::abs(back.samples[j] - sine.samples[j]));
  }
  CHECK(max_err <= std::pow(2.0, -15));
}

TEST_CASE("wav round-trip of silence is exact") {
  testing::TempDir tmp("wav_zero");
  const AudioClip zeros = clip_of(std::vector<double>(256, 0.0));
  const auto path = tmp.path() / "zeros.wav";
  audio::write_wav(zeros, path);
  const AudioClip back = audio::read_wav(path);
  CHECK(back.samples == zeros.samples);
}

TEST_CASE("wav writer clamps out-of-range samples and counts them") {
  testing::TempDir tmp("wav_clip");
  const AudioClip hot = clip_of({0.0, 1.5, -0.25});
  const auto path = tmp.path() / "hot.wav";
  const auto stats = audio::write_wav(hot, path);
  CHECK(stats.clipped_samples == 1);
  const AudioClip back = audio::read_wav(path);
  CHECK(back.samples[1] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
}

TEST_CASE("wav reader rejects malformed input") {
  testing::TempDir tmp("wav_bad");

  SUBCASE("not a riff file") {
    const auto path = tmp.path() / "junk.wav";
    std::ofstream(path, std::ios::binary) << "this is not audio";
    CHECK_THROWS_AS(audio::read_wav(path), FormatError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(audio::read_wav(tmp.path() / "absent.wav"), FormatError);
  }

  SUBCASE("stereo is rejected") {
    // Patch the channel count of a valid mono file.
    const auto path = tmp.path() / "stereo.wav";
    audio::write_wav(clip_of({0.1, 0.2}), path);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(22);
    const char two[2] = {2, 0};
    f.write(two, 2);
    f.close();
    CHECK_THROWS_AS(audio::read_wav(path), FormatError);
  }

  SUBCASE("non-finite samples are rejected on write") {
    CHECK_THROWS_AS(audio::write_wav(clip_of({0.1, std::nan("")}), tmp.path() / "nan.wav"),
                    InvalidInputError);
  }
}
