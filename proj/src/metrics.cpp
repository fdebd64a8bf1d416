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

#include "wmlab/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "wmlab/error.hpp"

namespace wmlab::metrics {

namespace {

// Two-row DP over generic token sequences.
template <typename Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b) {
  return edit_distance(a, b);
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  return edit_distance(a, b);
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream stream(text);
  std::string w;
  while (stream >> w) words.push_back(std::move(w));
  return words;
}

ScoreReport score(std::span<const std::string> refs, std::span<const std::string> hyps) {
  if (refs.size() != hyps.size()) {
    throw InvalidInputError("score: reference and hypothesis counts differ");
  }
  ScoreReport report;
  std::size_t word_dist = 0, word_len = 0, char_dist = 0, char_len = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto ref_words = split_words(refs[i]);
    const auto hyp_words = split_words(hyps[i]);
    PairScore wp{levenshtein(ref_words, hyp_words), ref_words.size()};
    PairScore cp{levenshtein(refs[i], hyps[i]), refs[i].size()};
    word_dist += wp.distance;
    word_len += wp.reference_length;
    char_dist += cp.distance;
    char_len += cp.reference_length;
    report.word_pairs.push_back(wp);
    report.char_pairs.push_back(cp);
  }
  if (word_len == 0 || char_len == 0) {
    throw InvalidInputError("score: reference corpus is empty after normalization");
  }
  report.wer = static_cast<double>(word_dist) / static_cast<double>(word_len);
  report.cer = static_cast<double>(char_dist) / static_cast<double>(char_len);
  return report;
}

double wer(std::span<const std::string> refs, std::span<const std::string> hyps) {
  return score(refs, hyps).wer;
}

double cer(std::span<const std::string> refs, std::span<const std::string> hyps) {
  return score(refs, hyps).cer;
}

double ber(std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2) {
  if (m1.size() != m2.size()) {
    throw InvalidInputError("ber: bit sequences have different lengths");
  }
  if (m1.empty()) {
    throw InvalidInputError("ber: bit sequences are empty");
  }
  std::size_t flips = 0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    if ((m1[i] != 0) != (m2[i] != 0)) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(m1.size());
}

}  // namespace wmlab::metrics
