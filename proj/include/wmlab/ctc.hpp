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

#ifndef WMLAB_CTC_HPP
#define WMLAB_CTC_HPP

#include <Eigen/Dense>
#include <span>

namespace wmlab::asr {

struct CtcResult {
  // Negative log likelihood of the target under all collapsing alignments;
  // +infinity when no alignment fits in the given frame count.
  double loss = 0.0;
  // d(loss)/d(log_probs), same shape as the input; all zeros when infeasible.
  Eigen::MatrixXd grad;
  bool infeasible = false;
};

// Forward-backward CTC loss over the blank-extended target, in log space.
// log_probs is frames x classes; every row must be a log-distribution
// (log-sum-exp zero within 1e-6). target holds class indices and must not
// contain the blank.
CtcResult ctc_loss(const Eigen::MatrixXd& log_probs, std::span<const int> target,
                   int blank_index);

// Frames required for a target to be alignable: one frame per label plus one
// per directly repeated label (a mandatory separating blank).
std::size_t ctc_min_frames(std::span<const int> target);

}  // namespace wmlab::asr

#endif  // WMLAB_CTC_HPP
