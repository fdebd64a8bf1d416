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

#ifndef WMLAB_RNG_HPP
#define WMLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace wmlab {

// splitmix64 step; used to derive independent per-stage seeds from one
// global seed so stages can be re-run in isolation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over raw bytes; also used as the content hash in binary file formats.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

// Stage seed = splitmix64(global_seed XOR fnv1a64(stage_name)).
// Documented in the README; every pipeline stage derives its seed this way.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage) {
  return splitmix64(global_seed ^ fnv1a64(stage));
}

// Per-item seed within a stage (e.g. one synthetic utterance).
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage,
                                 std::uint64_t index) {
  return splitmix64(derive_seed(global_seed, stage) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

using Rng = std::mt19937_64;

}  // namespace wmlab

#endif  // WMLAB_RNG_HPP
