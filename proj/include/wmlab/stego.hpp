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

#ifndef WMLAB_STEGO_HPP
#define WMLAB_STEGO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wmlab::stego {

inline constexpr int kDefaultMessageBits = 20;

// The owner's b-bit secret message.
struct StegoMessage {
  std::vector<std::uint8_t> bits;  // each 0 or 1

  bool operator==(const StegoMessage&) const = default;
  std::string to_string() const;
  static StegoMessage from_string(std::string_view bitstring);
  static StegoMessage random(std::size_t length, std::uint64_t seed);
};

// One text label hiding the message; clip_index says which owner-clip group
// it labels.
struct StegoText {
  std::vector<std::string> tokens;
  int clip_index = 0;

  std::string joined() const;  // tokens joined by single spaces
  static StegoText from_line(const std::string& line, int clip_index);
};

// A deterministic word-bigram rank codec. Each encoding step appends the
// candidate ranked by the next r message bits among the top 2^r successors of
// the current context word (counts descending, ties lexicographic); contexts
// with fewer than 2^r successors fall back to the unigram ranking. A fixed
// sentinel bigram terminates the payload. The corpus behind the counts is the
// verifier's secret; without it, texts do not decode.
class StegoModel {
 public:
  static StegoModel build(std::string_view corpus, int bits_per_step = 1);
  static StegoModel build_default();  // embedded corpus, r = 1

  // n pairwise-distinct texts carrying m; the seed picks the start contexts.
  std::vector<StegoText> encode_message(const StegoMessage& m, int n,
                                        std::uint64_t seed) const;

  // Inverse of encode_message for a single text. Throws UndecodableError when
  // the text was not produced by this model.
  StegoMessage decode_text(const StegoText& t) const;

  // The top-2^r ranked continuations the codec would consider after `context`.
  std::vector<std::string> ranked_candidates(const std::string& context) const;
  // Start contexts in rank order (most frequent sentence opener first).
  const std::vector<std::string>& start_contexts() const { return starts_; }

  int bits_per_step() const { return bits_per_step_; }
  std::uint64_t corpus_hash() const { return corpus_hash_; }

  static const std::vector<std::string>& sentinel();

  void save(const std::filesystem::path& path) const;
  static StegoModel load(const std::filesystem::path& path);

  bool operator==(const StegoModel&) const = default;

 private:
  StegoModel() = default;

  int bits_per_step_ = 1;
  std::uint64_t corpus_hash_ = 0;
  std::vector<std::string> vocab_;                       // sorted unique words
  std::vector<std::int64_t> unigram_;                    // counts by vocab id
  std::map<std::pair<int, int>, std::int64_t> bigram_;   // (ctx, next) -> count
  std::vector<std::string> starts_;
  std::vector<int> unigram_top_;                         // precomputed ranking

  int word_id(const std::string& w) const;
  std::vector<int> ranked_candidate_ids(int context_id) const;
  void finalize();
};

// Owner-side bridge from a noisy transcript to a message: picks the known
// stego with the smallest character error rate to the transcript (reference =
// the stego) and returns its message plus that CER. Ties go to the lowest
// clip_index.
struct NearestDecode {
  StegoMessage message;
  double cer_to_match = 0.0;
  int clip_index = 0;
};
NearestDecode nearest_stego_decode(const std::string& transcript,
                                   std::span<const StegoText> known_stegos,
                                   const StegoModel& model);

}  // namespace wmlab::stego

#endif  // WMLAB_STEGO_HPP
