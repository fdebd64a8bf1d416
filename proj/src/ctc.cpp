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

#include "wmlab/ctc.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wmlab/error.hpp"

namespace wmlab::asr {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_add(double a, double b, double c) { return log_add(log_add(a, b), c); }

void validate(const Eigen::MatrixXd& log_probs, std::span<const int> target,
              int blank_index) {
  const auto classes = log_probs.cols();
  if (log_probs.rows() < 1 || classes < 2) {
    throw InvalidInputError("ctc_loss: need at least one frame and two classes");
  }
  if (blank_index < 0 || blank_index >= classes) {
    throw InvalidInputError("ctc_loss: blank index out of range");
  }
  // Loose enough that finite-difference probes (step ~1e-5) stay admissible.
  for (Eigen::Index t = 0; t < log_probs.rows(); ++t) {
    const double m = log_probs.row(t).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < classes; ++c) sum += std::exp(log_probs(t, c) - m);
    const double lse = m + std::log(sum);
    if (!(std::abs(lse) <= 1e-4)) {
      throw InvalidInputError("ctc_loss: row " + std::to_string(t) +
                              " is not a log-distribution (lse=" + std::to_string(lse) + ")");
    }
  }
  for (int label : target) {
    if (label < 0 || label >= classes || label == blank_index) {
      throw InvalidInputError("ctc_loss: target label out of range or blank");
    }
  }
}

}  // namespace

std::size_t ctc_min_frames(std::span<const int> target) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++repeats;
  }
  return target.size() + repeats;
}

CtcResult ctc_loss(const Eigen::MatrixXd& log_probs, std::span<const int> target,
                   int blank_index) {
  validate(log_probs, target, blank_index);

  const auto frames = log_probs.rows();
  CtcResult result;
  result.grad = Eigen::MatrixXd::Zero(frames, log_probs.cols());

  if (static_cast<std::size_t>(frames) < ctc_min_frames(target)) {
    result.loss = std::numeric_limits<double>::infinity();
    result.infeasible = true;
    return result;
  }

  // Blank-extended label sequence: blank, l1, blank, l2, ..., blank.
  const auto ext_len = static_cast<Eigen::Index>(2 * target.size() + 1);
  std::vector<int> ext(static_cast<std::size_t>(ext_len), blank_index);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  auto skip_allowed = [&](Eigen::Index s) {
    return s >= 2 && ext[static_cast<std::size_t>(s)] != blank_index &&
           ext[static_cast<std::size_t>(s)] != ext[static_cast<std::size_t>(s - 2)];
  };
  auto lp = [&](Eigen::Index t, Eigen::Index s) {
    return log_probs(t, ext[static_cast<std::size_t>(s)]);
  };

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(frames, ext_len, kLogZero);
  alpha(0, 0) = lp(0, 0);
  if (ext_len > 1) alpha(0, 1) = lp(0, 1);
  for (Eigen::Index t = 1; t < frames; ++t) {
    for (Eigen::Index s = 0; s < ext_len; ++s) {
      double acc = alpha(t - 1, s);
      if (s >= 1) acc = log_add(acc, alpha(t - 1, s - 1));
      if (skip_allowed(s)) acc = log_add(acc, alpha(t - 1, s - 2));
      alpha(t, s) = (acc == kLogZero) ? kLogZero : acc + lp(t, s);
    }
  }

  double log_prob = alpha(frames - 1, ext_len - 1);
  if (ext_len > 1) log_prob = log_add(log_prob, alpha(frames - 1, ext_len - 2));
  if (log_prob == kLogZero) {
    // Alignment killed by hard zeros in the inputs rather than by length.
    result.loss = std::numeric_limits<double>::infinity();
    result.infeasible = true;
    return result;
  }

  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(frames, ext_len, kLogZero);
  beta(frames - 1, ext_len - 1) = lp(frames - 1, ext_len - 1);
  if (ext_len > 1) beta(frames - 1, ext_len - 2) = lp(frames - 1, ext_len - 2);
  for (Eigen::Index t = frames - 2; t >= 0; --t) {
    for (Eigen::Index s = 0; s < ext_len; ++s) {
      double acc = beta(t + 1, s);
      if (s + 1 < ext_len) acc = log_add(acc, beta(t + 1, s + 1));
      if (s + 2 < ext_len && skip_allowed(s + 2)) acc = log_add(acc, beta(t + 1, s + 2));
      beta(t, s) = (acc == kLogZero) ? kLogZero : acc + lp(t, s);
    }
  }

  result.loss = -log_prob;
  // d(-log P)/d(log_probs[t][c]) = -(1/P) * sum_{s: ext[s]=c} exp(alpha + beta - lp),
  // where the lp term removes the emission double-counted by alpha*beta.
  for (Eigen::Index t = 0; t < frames; ++t) {
    std::vector<double> per_class(static_cast<std::size_t>(log_probs.cols()), kLogZero);
    for (Eigen::Index s = 0; s < ext_len; ++s) {
      if (alpha(t, s) == kLogZero || beta(t, s) == kLogZero) continue;
      const auto c = static_cast<std::size_t>(ext[static_cast<std::size_t>(s)]);
      per_class[c] = log_add(per_class[c], alpha(t, s) + beta(t, s) - lp(t, s));
    }
    for (Eigen::Index c = 0; c < log_probs.cols(); ++c) {
      const double v = per_class[static_cast<std::size_t>(c)];
      if (v != kLogZero) result.grad(t, c) = -std::exp(v - log_prob);
    }
  }
  return result;
}

}  // namespace wmlab::asr
