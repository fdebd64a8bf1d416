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
#include <random>
#include <vector>

#include <doctest.h>

#include "wmlab/ctc.hpp"
#include "wmlab/error.hpp"
#include "wmlab/rng.hpp"

using namespace wmlab;

namespace {

Eigen::MatrixXd random_log_probs(Rng& rng, int frames, int classes) {
  std::uniform_real_distribution<double> logits(-2.0, 2.0);
  Eigen::MatrixXd m(frames, classes);
  for (int t = 0; t < frames; ++t) {
    for (int c = 0; c < classes; ++c) m(t, c) = logits(rng);
    const double mx = m.row(t).maxCoeff();
    const double lse = mx + std::log((m.row(t).array() - mx).exp().sum());
    m.row(t).array() -= lse;
  }
  return m;
}

// Path-enumeration oracle: walk every frame labeling, collapse repeats then
// blanks, and add up the probability of paths matching the target.
double brute_force_nll(const Eigen::MatrixXd& log_probs, const std::vector<int>& target,
                       int blank) {
  const int frames = static_cast<int>(log_probs.rows());
  const int classes = static_cast<int>(log_probs.cols());
  double total = 0.0;
  std::vector<int> path(static_cast<std::size_t>(frames), 0);
  while (true) {
    std::vector<int> collapsed;
    for (int t = 0; t < frames; ++t) {
      if ((t == 0 || path[t] != path[t - 1]) && path[t] != blank) {
        collapsed.push_back(path[static_cast<std::size_t>(t)]);
      }
    }
    if (collapsed == target) {
      double logp = 0.0;
      for (int t = 0; t < frames; ++t) logp += log_probs(t, path[static_cast<std::size_t>(t)]);
      total += std::exp(logp);
    }
    int pos = frames - 1;
    while (pos >= 0 && path[static_cast<std::size_t>(pos)] == classes - 1) {
      path[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++path[static_cast<std::size_t>(pos)];
  }
  return -std::log(total);
}

}  // namespace

TEST_CASE("single frame, single label") {
  Eigen::MatrixXd lp(1, 2);
  const double p = 0.3;
  lp << std::log(p), std::log(1.0 - p);
  const auto result = asr::ctc_loss(lp, std::vector<int>{0}, 1);
  CHECK(result.loss == doctest::Approx(-std::log(p)).epsilon(1e-12));
  CHECK_FALSE(result.infeasible);
}

TEST_CASE("two uniform frames over {a, blank} give probability 3/4") {
  Eigen::MatrixXd lp(2, 2);
  lp.setConstant(std::log(0.5));
  const auto result = asr::ctc_loss(lp, std::vector<int>{0}, 1);
  CHECK(result.loss == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
}

TEST_CASE("unattainable targets are flagged with infinite loss and zero gradient") {
  Eigen::MatrixXd lp(1, 3);
  lp.setConstant(std::log(1.0 / 3.0));
  const auto result = asr::ctc_loss(lp, std::vector<int>{0, 1}, 2);
  CHECK(result.infeasible);
  CHECK(std::isinf(result.loss));
  CHECK(result.grad.cwiseAbs().maxCoeff() == 0.0);

  // A repeated label needs a separating blank: "aa" takes three frames.
  CHECK(asr::ctc_min_frames(std::vector<int>{0, 0}) == 3);
  Eigen::MatrixXd lp2(2, 2);
  lp2.setConstant(std::log(0.5));
  CHECK(asr::ctc_loss(lp2, std::vector<int>{0, 0}, 1).infeasible);
}

TEST_CASE("empty target scores the all-blank alignment") {
  Eigen::MatrixXd lp(3, 2);
  lp.setConstant(std::log(0.5));
  const auto result = asr::ctc_loss(lp, std::vector<int>{}, 1);
  CHECK(result.loss == doctest::Approx(-3.0 * std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("input validation") {
  Eigen::MatrixXd lp(1, 2);
  lp << 0.0, 0.0;  // not a log-distribution
  CHECK_THROWS_AS(asr::ctc_loss(lp, std::vector<int>{0}, 1), InvalidInputError);

  Eigen::MatrixXd ok(1, 2);
  ok.setConstant(std::log(0.5));
  CHECK_THROWS_AS(asr::ctc_loss(ok, std::vector<int>{1}, 1), InvalidInputError);  // blank
  CHECK_THROWS_AS(asr::ctc_loss(ok, std::vector<int>{5}, 1), InvalidInputError);  // range
}

TEST_CASE("dynamic program equals path enumeration on small instances") {
  Rng rng(616);
  for (int classes = 2; classes <= 3; ++classes) {
    const int blank = classes - 1;
    for (int frames = 1; frames <= 4; ++frames) {
      std::vector<std::vector<int>> targets{{}};
      for (int a = 0; a < blank; ++a) {
        targets.push_back({a});
        for (int b = 0; b < blank; ++b) targets.push_back({a, b});
      }
      for (const auto& target : targets) {
        const Eigen::MatrixXd lp = random_log_probs(rng, frames, classes);
        const auto result = asr::ctc_loss(lp, target, blank);
        if (static_cast<std::size_t>(frames) < asr::ctc_min_frames(target)) {
          CHECK(result.infeasible);
          continue;
        }
        const double oracle = brute_force_nll(lp, target, blank);
        CHECK(result.loss == doctest::Approx(oracle).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(717);
  for (int trial = 0; trial < 10; ++trial) {
    const int frames = 2 + static_cast<int>(rng() % 4);
    const int classes = 2 + static_cast<int>(rng() % 3);
    const int blank = classes - 1;
    std::vector<int> target;
    const int target_len = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < target_len; ++i) {
      target.push_back(static_cast<int>(rng() % static_cast<unsigned>(blank)));
    }
    if (static_cast<std::size_t>(frames) < asr::ctc_min_frames(target)) continue;

    const Eigen::MatrixXd lp = random_log_probs(rng, frames, classes);
    const auto result = asr::ctc_loss(lp, target, blank);
    REQUIRE_FALSE(result.infeasible);

    const double step = 1e-5;
    for (int t = 0; t < frames; ++t) {
      for (int c = 0; c < classes; ++c) {
        Eigen::MatrixXd plus = lp, minus = lp;
        plus(t, c) += step;
        minus(t, c) -= step;
        const double fd = (asr::ctc_loss(plus, target, blank).loss -
                           asr::ctc_loss(minus, target, blank).loss) /
                          (2.0 * step);
        const double analytic = result.grad(t, c);
        const double scale = std::max({std::abs(fd), std::abs(analytic), 1e-8});
        CHECK(std::abs(fd - analytic) / scale < 1e-4);
      }
    }
  }
}
