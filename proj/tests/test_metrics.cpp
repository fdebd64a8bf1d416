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

#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "wmlab/error.hpp"
#include "wmlab/metrics.hpp"
#include "wmlab/rng.hpp"

using namespace wmlab;

namespace {

// Independent oracle: the textbook recursive definition, no memoization.
std::size_t lev_recursive(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::size_t del = lev_recursive(a.substr(1), b) + 1;
  const std::size_t ins = lev_recursive(a, b.substr(1)) + 1;
  const std::size_t sub =
      lev_recursive(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
  return std::min({del, ins, sub});
}

std::string random_string(Rng& rng, std::size_t max_len, int symbols) {
  std::string s;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(static_cast<char>('a' + rng() % static_cast<unsigned>(symbols)));
  }
  return s;
}

std::vector<std::string> one(const std::string& s) { return {s}; }

}  // namespace

TEST_CASE("levenshtein basic examples") {
  CHECK(metrics::levenshtein(std::string("abc"), std::string("abc")) == 0);
  CHECK(metrics::levenshtein(std::string("abc"), std::string("axc")) == 1);
  CHECK(metrics::levenshtein(std::string(""), std::string("xyz")) == 3);
  CHECK(metrics::levenshtein(std::string("kitten"), std::string("sitting")) == 3);
}

TEST_CASE("levenshtein equals the exhaustive recursion on short strings") {
  // All pairs up to length 3 over a 3-symbol alphabet (the full <=6 sweep
  // runs in the acceptance suite).
  std::vector<std::string> all;
  const std::string alphabet = "abc";
  all.emplace_back("");
  for (std::size_t start = 0, stop = all.size(); true;) {
    std::vector<std::string> next;
    for (std::size_t i = start; i < stop; ++i) {
      for (char c : alphabet) next.push_back(all[i] + c);
    }
    if (next.front().size() >= 3) {
      all.insert(all.end(), next.begin(), next.end());
      break;
    }
    start = all.size();
    all.insert(all.end(), next.begin(), next.end());
    stop = all.size();
  }
  for (const auto& a : all) {
    for (const auto& b : all) {
      CHECK(metrics::levenshtein(a, b) == lev_recursive(a, b));
    }
  }
}

TEST_CASE("levenshtein metric properties on random strings") {
  Rng rng(515);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string a = random_string(rng, 8, 3);
    const std::string b = random_string(rng, 8, 3);
    const std::string c = random_string(rng, 8, 3);
    const std::size_t ab = metrics::levenshtein(a, b);
    CHECK(ab == metrics::levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(ab <= metrics::levenshtein(a, c) + metrics::levenshtein(c, b));
    const std::size_t lo =
        a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    CHECK(ab >= lo);
    CHECK(ab <= std::max(a.size(), b.size()));
  }
}

TEST_CASE("wer and cer pool distances over the corpus") {
  const std::vector<std::string> refs{"the cat sat"};
  const std::vector<std::string> hyps{"the hat sat"};
  CHECK(metrics::wer(refs, hyps) == doctest::Approx(1.0 / 3.0));
  CHECK(metrics::cer(refs, hyps) == doctest::Approx(1.0 / 11.0));

  CHECK(metrics::wer(refs, refs) == 0.0);
  CHECK(metrics::cer(refs, refs) == 0.0);

  // Entirely unrelated same-word-count hypotheses: pure substitutions.
  const std::vector<std::string> noise{"foo bar baz"};
  CHECK(metrics::wer(refs, noise) == doctest::Approx(1.0));
}

TEST_CASE("wer can exceed one on inserted words") {
  const std::vector<std::string> refs{"hi"};
  const std::vector<std::string> hyps{"hi there you two"};
  CHECK(metrics::wer(refs, hyps) == doctest::Approx(3.0));
}

TEST_CASE("score rejects mismatched or empty corpora") {
  const std::vector<std::string> refs{"a"};
  const std::vector<std::string> two{"a", "b"};
  CHECK_THROWS_AS(metrics::wer(refs, two), InvalidInputError);
  const std::vector<std::string> empty_ref{""};
  CHECK_THROWS_AS(metrics::cer(empty_ref, one("x")), InvalidInputError);
}

TEST_CASE("ber counts bit flips") {
  const std::vector<std::uint8_t> zeros(20, 0);
  const std::vector<std::uint8_t> ones(20, 1);
  CHECK(metrics::ber(zeros, zeros) == 0.0);
  CHECK(metrics::ber(zeros, ones) == 1.0);

  std::vector<std::uint8_t> flipped = zeros;
  flipped[7] = 1;
  CHECK(metrics::ber(zeros, flipped) == doctest::Approx(0.05));

  const std::vector<std::uint8_t> shorter(19, 0);
  CHECK_THROWS_AS(metrics::ber(zeros, shorter), InvalidInputError);
}
