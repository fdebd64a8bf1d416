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

#include "wmlab/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "wmlab/error.hpp"

namespace wmlab::audio {

namespace {

double sum_squares(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

void check_finite(const AudioClip& clip, const char* who) {
  for (double x : clip.samples) {
    if (!std::isfinite(x)) {
      throw InvalidInputError(std::string(who) + ": clip contains non-finite samples");
    }
  }
}

}  // namespace

TiledPattern tile_owner_clip(const AudioClip& s, std::size_t target_len) {
  if (s.samples.empty()) {
    throw InvalidInputError("tile_owner_clip: owner clip is empty");
  }
  if (target_len == 0) {
    throw InvalidInputError("tile_owner_clip: target length must be >= 1");
  }
  const std::size_t ls = s.samples.size();
  TiledPattern out;
  out.repetitions = (target_len + ls - 1) / ls;  // ceil(target_len / ls)
  out.full.resize(out.repetitions * ls);
  for (std::size_t j = 0; j < out.full.size(); ++j) {
    out.full[j] = s.samples[j % ls];
  }
  out.cropped.assign(out.full.begin(),
                     out.full.begin() + static_cast<std::ptrdiff_t>(target_len));
  return out;
}

double mix_weight(std::span<const double> x, std::span<const double> u, double k) {
  if (k < 0.0) {
    throw InvalidInputError("mix_weight: power ratio k must be >= 0");
  }
  const double energy_u = sum_squares(u);
  if (!(energy_u > 0.0)) {
    throw InvalidInputError("mix_weight: pattern has zero energy");
  }
  const double energy_x = sum_squares(x);
  const double num = std::sqrt(energy_x * k / static_cast<double>(x.size()));
  const double den = std::sqrt(energy_u / static_cast<double>(u.size()));
  return num / den;
}

TriggerSynthesis synthesize_trigger(const AudioClip& x, const AudioClip& s, double k) {
  if (x.samples.empty() || s.samples.empty()) {
    throw InvalidInputError("synthesize_trigger: clips must be non-empty");
  }
  if (x.sample_rate_hz != s.sample_rate_hz) {
    throw InvalidInputError("synthesize_trigger: sample rates differ");
  }
  check_finite(x, "synthesize_trigger");
  check_finite(s, "synthesize_trigger");

  TriggerSynthesis out;
  out.trigger = x;
  if (!(sum_squares(x.samples) > 0.0)) {
    out.degenerate_input = true;  // w = 0 by the formula; x' == x
    return out;
  }
  const TiledPattern tiled = tile_owner_clip(s, x.samples.size());
  out.weight = mix_weight(x.samples, tiled.full, k);
  for (std::size_t j = 0; j < x.samples.size(); ++j) {
    out.trigger.samples[j] = x.samples[j] + out.weight * tiled.cropped[j];
  }
  return out;
}

namespace {

struct RiffHeader {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint32_t data_size = 0;
  std::streamoff data_offset = 0;
};

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

RiffHeader parse_riff(std::istream& in, const std::filesystem::path& path) {
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) {
    throw FormatError("read_wav: not a RIFF file: " + path.string());
  }
  read_u32(in);  // overall size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) {
    throw FormatError("read_wav: missing WAVE tag: " + path.string());
  }

  RiffHeader h;
  bool have_fmt = false;
  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_u32(in);
    if (!in) break;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) {
        throw FormatError("read_wav: fmt chunk too small: " + path.string());
      }
      h.format = read_u16(in);
      h.channels = read_u16(in);
      h.sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      h.bits_per_sample = read_u16(in);
      in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      h.data_size = chunk_size;
      h.data_offset = in.tellg();
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || h.data_offset == 0) {
    throw FormatError("read_wav: missing fmt or data chunk: " + path.string());
  }
  return h;
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("read_wav: cannot open " + path.string());
  }
  const RiffHeader h = parse_riff(in, path);
  if (h.format != 1) {
    throw FormatError("read_wav: only PCM is supported: " + path.string());
  }
  if (h.channels != 1) {
    throw FormatError("read_wav: only mono is supported: " + path.string());
  }
  if (h.bits_per_sample != 16) {
    throw FormatError("read_wav: only 16-bit samples are supported: " + path.string());
  }

  in.clear();
  in.seekg(h.data_offset);
  const std::size_t count = h.data_size / 2;
  std::vector<char> raw(h.data_size);
  in.read(raw.data(), static_cast<std::streamsize>(h.data_size));
  if (!in) {
    throw FormatError("read_wav: truncated data chunk: " + path.string());
  }

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(h.sample_rate);
  clip.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto lo = static_cast<unsigned char>(raw[2 * i]);
    const auto hi = static_cast<unsigned char>(raw[2 * i + 1]);
    const auto v = static_cast<std::int16_t>(lo | (hi << 8));
    clip.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return clip;
}

WavWriteStats write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  check_finite(clip, "write_wav");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FormatError("write_wav: cannot open " + path.string());
  }

  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits per sample
  out.write("data", 4);
  write_u32(out, data_size);

  WavWriteStats stats;
  for (double x : clip.samples) {
    double v = x;
    if (v > 1.0) {
      v = 1.0;
      ++stats.clipped_samples;
    } else if (v < -1.0) {
      v = -1.0;
      ++stats.clipped_samples;
    }
    // Same 1/32768 scale as the reader keeps round-trip error within half a
    // quantization step (2^-16), except +1.0 which lands on 32767 (2^-15).
    double scaled = std::round(v * 32768.0);
    scaled = std::clamp(scaled, -32768.0, 32767.0);
    const auto q = static_cast<std::int16_t>(scaled);
    write_u16(out, static_cast<std::uint16_t>(q));
  }
  if (!out) {
    throw FormatError("write_wav: write failed: " + path.string());
  }
  return stats;
}

}  // namespace wmlab::audio
