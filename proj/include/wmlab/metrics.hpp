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

#ifndef WMLAB_METRICS_HPP
#define WMLAB_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wmlab::metrics {

// Minimum number of unit-cost insertions, deletions and substitutions that
// transform b into a.
std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b);
std::size_t levenshtein(const std::string& a, const std::string& b);

struct PairScore {
  std::size_t distance = 0;
  std::size_t reference_length = 0;
};

struct ScoreReport {
  double wer = 0.0;
  double cer = 0.0;
  std::vector<PairScore> word_pairs;
  std::vector<PairScore> char_pairs;
};

// Corpus-pooled rates: sum of edit distances over sum of reference lengths.
// WER tokenizes on whitespace; CER scores characters including spaces. Inputs
// are expected to be normalized already (see asr::normalize_text). Throws
// InvalidInputError on length mismatch or an empty reference corpus.
double wer(std::span<const std::string> refs, std::span<const std::string> hyps);
double cer(std::span<const std::string> refs, std::span<const std::string> hyps);
ScoreReport score(std::span<const std::string> refs, std::span<const std::string> hyps);

// Hamming distance divided by length; lengths must match.
double ber(std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2);

std::vector<std::string> split_words(const std::string& text);

}  // namespace wmlab::metrics

#endif  // WMLAB_METRICS_HPP
