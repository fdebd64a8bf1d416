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

#include "wmlab/asr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wmlab/binio.hpp"
#include "wmlab/error.hpp"
#include "wmlab/rng.hpp"

namespace wmlab::asr {

int Vocab::char_index(char c) const {
  const auto pos = characters.find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

std::vector<int> Vocab::encode(const std::string& text) const {
  std::vector<int> labels;
  labels.reserve(text.size());
  for (char c : text) {
    const int idx = char_index(c);
    if (idx < 0) {
      throw InvalidInputError(std::string("Vocab::encode: character '") + c +
                              "' is not in the vocabulary");
    }
    labels.push_back(idx);
  }
  return labels;
}

std::string Vocab::decode(std::span<const int> labels) const {
  std::string out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l < 0 || l >= static_cast<int>(characters.size())) {
      throw InvalidInputError("Vocab::decode: label out of range");
    }
    out.push_back(characters[static_cast<std::size_t>(l)]);
  }
  return out;
}

std::string normalize_text(const std::string& text, const Vocab& vocab) {
  std::string kept;
  kept.reserve(text.size());
  for (char c : text) {
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const char mapped = (lower == '\t' || lower == '\n' || lower == '\r') ? ' ' : lower;
    if (vocab.char_index(mapped) >= 0) kept.push_back(mapped);
  }
  std::string out;
  out.reserve(kept.size());
  for (char c : kept) {
    if (c == ' ') {
      if (out.empty() || out.back() == ' ') continue;
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Real DFT + triangular filter bank folded into two dense matrices; spectra
// come out of plain matrix products, which keeps the frontend deterministic
// and fast enough for desk-scale corpora.
struct Frontend {
  Eigen::MatrixXd dft_cos;  // bins x frame_len (window folded in)
  Eigen::MatrixXd dft_sin;
  Eigen::MatrixXd mel;      // num_filters x bins
  int frame_len = 0;
  int hop = 0;

  Frontend(const FrontendConfig& cfg, int sample_rate_hz) {
    frame_len = static_cast<int>(std::lround(cfg.frame_len_ms * sample_rate_hz / 1000.0));
    hop = static_cast<int>(std::lround(cfg.hop_ms * sample_rate_hz / 1000.0));
    if (frame_len < 2 || hop < 1) {
      throw InvalidInputError("extract_features: degenerate frame geometry");
    }
    const int bins = cfg.fft_size / 2 + 1;

    Eigen::VectorXd window(frame_len);
    for (int j = 0; j < frame_len; ++j) {
      window(j) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / (frame_len - 1));
    }
    dft_cos.resize(bins, frame_len);
    dft_sin.resize(bins, frame_len);
    for (int k = 0; k < bins; ++k) {
      for (int j = 0; j < frame_len; ++j) {
        const double angle = 2.0 * std::numbers::pi * k * j / cfg.fft_size;
        dft_cos(k, j) = std::cos(angle) * window(j);
        dft_sin(k, j) = -std::sin(angle) * window(j);
      }
    }

    const double nyquist = sample_rate_hz / 2.0;
    const double mel_max = hz_to_mel(nyquist);
    std::vector<double> edges(static_cast<std::size_t>(cfg.num_filters) + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / (edges.size() - 1));
    }
    mel = Eigen::MatrixXd::Zero(cfg.num_filters, bins);
    for (int m = 0; m < cfg.num_filters; ++m) {
      const double lo = edges[static_cast<std::size_t>(m)];
      const double mid = edges[static_cast<std::size_t>(m) + 1];
      const double hi = edges[static_cast<std::size_t>(m) + 2];
      for (int k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * sample_rate_hz / cfg.fft_size;
        if (f > lo && f < mid) {
          mel(m, k) = (f - lo) / (mid - lo);
        } else if (f >= mid && f < hi) {
          mel(m, k) = (hi - f) / (hi - mid);
        }
      }
    }
  }
};

}  // namespace

FeatureFrames extract_features(const audio::AudioClip& clip, const FrontendConfig& config) {
  if (clip.samples.empty()) {
    throw InvalidInputError("extract_features: empty clip");
  }
  for (double s : clip.samples) {
    if (!std::isfinite(s)) throw InvalidInputError("extract_features: non-finite sample");
  }
  const Frontend fe(config, clip.sample_rate_hz);
  const auto n = static_cast<int>(clip.samples.size());
  if (n < fe.frame_len) {
    throw InvalidInputError("extract_features: clip shorter than one frame");
  }
  const int num_frames = (n - fe.frame_len) / fe.hop + 1;

  FeatureFrames out;
  out.frame_len_ms = config.frame_len_ms;
  out.frame_hop_ms = config.hop_ms;
  out.frames.resize(num_frames, config.num_filters);

  Eigen::VectorXd frame(fe.frame_len);
  for (int t = 0; t < num_frames; ++t) {
    const int start = t * fe.hop;
    for (int j = 0; j < fe.frame_len; ++j) {
      frame(j) = clip.samples[static_cast<std::size_t>(start + j)];
    }
    const Eigen::VectorXd re = fe.dft_cos * frame;
    const Eigen::VectorXd im = fe.dft_sin * frame;
    const Eigen::VectorXd power = re.array().square() + im.array().square();
    Eigen::VectorXd energies = fe.mel * power;
    out.frames.row(t) = energies.array().max(1e-10).log().transpose();
  }

  // Per-utterance, per-dimension mean/variance normalization.
  for (int d = 0; d < out.frames.cols(); ++d) {
    const double mean = out.frames.col(d).mean();
    const double var = (out.frames.col(d).array() - mean).square().mean();
    out.frames.col(d) = (out.frames.col(d).array() - mean) / std::sqrt(var + 1e-10);
  }
  return out;
}

AsrModel AsrModel::init(const Vocab& vocab, const FrontendConfig& frontend,
                        int hidden_size, const Hyperparams& hparams) {
  if (hidden_size < 1) {
    throw InvalidInputError("AsrModel::init: hidden size must be >= 1");
  }
  AsrModel model;
  model.vocab_ = vocab;
  model.frontend_ = frontend;
  model.hparams_ = hparams;
  model.input_dim_ = frontend.num_filters;
  model.hidden_size_ = hidden_size;

  const int h = hidden_size;
  const int in = model.input_dim_;
  const int classes = vocab.num_classes();
  Rng rng(derive_seed(hparams.seed, "asr.init"));
  auto uniform = [&rng](double radius) {
    // rng() in [0, 2^64); map to [-radius, radius)
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return radius * (2.0 * unit - 1.0);
  };

  model.w_gates_.resize(4 * h, in + h);
  const double gate_radius = 1.0 / std::sqrt(static_cast<double>(in + h));
  for (Eigen::Index r = 0; r < model.w_gates_.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.w_gates_.cols(); ++c) {
      model.w_gates_(r, c) = uniform(gate_radius);
    }
  }
  model.b_gates_ = Eigen::VectorXd::Zero(4 * h);
  model.b_gates_.segment(h, h).setConstant(1.0);  // forget-gate bias

  model.w_out_.resize(classes, h);
  const double out_radius = 1.0 / std::sqrt(static_cast<double>(h));
  for (Eigen::Index r = 0; r < model.w_out_.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.w_out_.cols(); ++c) {
      model.w_out_(r, c) = uniform(out_radius);
    }
  }
  model.b_out_ = Eigen::VectorXd::Zero(classes);
  return model;
}

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}

void log_softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double mx = m.row(r).maxCoeff();
    const double lse = mx + std::log((m.row(r).array() - mx).exp().sum());
    m.row(r).array() -= lse;
  }
}

// Everything the backward pass needs from one forward step.
struct StepCache {
  Eigen::MatrixXd zin;     // (I+H) x B
  Eigen::ArrayXXd gi, gf, gg, go;  // H x B each
  Eigen::MatrixXd c, h, tanh_c;    // H x B
};

struct Gradients {
  Eigen::MatrixXd w_gates;
  Eigen::VectorXd b_gates;
  Eigen::MatrixXd w_out;
  Eigen::VectorXd b_out;

  explicit Gradients(const AsrModel& m)
      : w_gates(Eigen::MatrixXd::Zero(m.gate_weights().rows(), m.gate_weights().cols())),
        b_gates(Eigen::VectorXd::Zero(m.gate_bias().size())),
        w_out(Eigen::MatrixXd::Zero(m.output_weights().rows(), m.output_weights().cols())),
        b_out(Eigen::VectorXd::Zero(m.output_bias().size())) {}

  double squared_norm() const {
    return w_gates.squaredNorm() + b_gates.squaredNorm() + w_out.squaredNorm() +
           b_out.squaredNorm();
  }
  void scale(double s) {
    w_gates *= s;
    b_gates *= s;
    w_out *= s;
    b_out *= s;
  }
};

// Forward + CTC + backward over one mini-batch in lockstep. Sequences are
// zero-padded to the longest one; padded frames get zero dlogits, so they
// contribute nothing to the gradients.
double batch_gradients(const AsrModel& model, std::span<const FeatureFrames* const> feats,
                       std::span<const std::vector<int>* const> targets, Gradients& grads,
                       std::size_t* infeasible) {
  const int batch = static_cast<int>(feats.size());
  const int h = model.hidden_size();
  const int in_dim = model.input_dim();
  const int classes = model.vocab().num_classes();

  Eigen::Index t_max = 0;
  for (const auto* f : feats) t_max = std::max(t_max, f->frames.rows());

  std::vector<StepCache> steps(static_cast<std::size_t>(t_max));
  Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(h, batch);
  Eigen::MatrixXd c_prev = Eigen::MatrixXd::Zero(h, batch);
  std::vector<Eigen::MatrixXd> log_probs(feats.size());
  for (std::size_t b = 0; b < feats.size(); ++b) {
    log_probs[b].resize(feats[b]->frames.rows(), classes);
  }

  for (Eigen::Index t = 0; t < t_max; ++t) {
    auto& step = steps[static_cast<std::size_t>(t)];
    step.zin.resize(in_dim + h, batch);
    for (int b = 0; b < batch; ++b) {
      const auto& rows = feats[static_cast<std::size_t>(b)]->frames;
      if (t < rows.rows()) {
        step.zin.col(b).head(in_dim) = rows.row(t).transpose();
      } else {
        step.zin.col(b).head(in_dim).setZero();
      }
    }
    step.zin.bottomRows(h) = h_prev;

    Eigen::MatrixXd z = model.gate_weights() * step.zin;
    z.colwise() += model.gate_bias();
    step.gi = sigmoid(z.topRows(h).array());
    step.gf = sigmoid(z.middleRows(h, h).array());
    step.gg = z.middleRows(2 * h, h).array().tanh();
    step.go = sigmoid(z.bottomRows(h).array());
    step.c = (step.gf * c_prev.array() + step.gi * step.gg).matrix();
    step.tanh_c = step.c.array().tanh().matrix();
    step.h = (step.go * step.tanh_c.array()).matrix();

    Eigen::MatrixXd logits = model.output_weights() * step.h;
    logits.colwise() += model.output_bias();
    for (int b = 0; b < batch; ++b) {
      auto& lp = log_probs[static_cast<std::size_t>(b)];
      if (t < lp.rows()) lp.row(t) = logits.col(b).transpose();
    }

    h_prev = step.h;
    c_prev = step.c;
  }

  double loss_sum = 0.0;
  std::vector<Eigen::MatrixXd> dlog_probs(feats.size());
  for (std::size_t b = 0; b < feats.size(); ++b) {
    auto& lp = log_probs[b];
    log_softmax_rows(lp);
    const CtcResult ctc = ctc_loss(lp, *targets[b], model.vocab().blank_index());
    if (ctc.infeasible) {
      if (infeasible != nullptr) ++(*infeasible);
      dlog_probs[b] = Eigen::MatrixXd::Zero(lp.rows(), classes);
      continue;
    }
    loss_sum += ctc.loss;
    // Chain through the log-softmax: dlogit = g - softmax * sum(g).
    dlog_probs[b].resize(lp.rows(), classes);
    for (Eigen::Index t = 0; t < lp.rows(); ++t) {
      const double gsum = ctc.grad.row(t).sum();
      dlog_probs[b].row(t) =
          ctc.grad.row(t) - (lp.row(t).array().exp() * gsum).matrix();
    }
  }

  const double inv_batch = 1.0 / static_cast<double>(batch);
  const Eigen::MatrixXd zero_state = Eigen::MatrixXd::Zero(h, batch);
  Eigen::MatrixXd dh_next = zero_state;
  Eigen::MatrixXd dc_next = zero_state;
  Eigen::MatrixXd dlogits(classes, batch);
  for (Eigen::Index t = t_max - 1; t >= 0; --t) {
    const auto& step = steps[static_cast<std::size_t>(t)];
    dlogits.setZero();
    for (int b = 0; b < batch; ++b) {
      const auto& dlp = dlog_probs[static_cast<std::size_t>(b)];
      if (t < dlp.rows()) dlogits.col(b) = dlp.row(t).transpose() * inv_batch;
    }

    grads.w_out.noalias() += dlogits * step.h.transpose();
    grads.b_out.noalias() += dlogits.rowwise().sum();

    Eigen::ArrayXXd dh =
        (model.output_weights().transpose() * dlogits + dh_next).array();
    const Eigen::ArrayXXd dho = dh * step.tanh_c.array();
    Eigen::ArrayXXd dc =
        dc_next.array() + dh * step.go * (1.0 - step.tanh_c.array().square());
    const Eigen::MatrixXd& c_before =
        t == 0 ? zero_state : steps[static_cast<std::size_t>(t - 1)].c;

    Eigen::MatrixXd dz(4 * h, batch);
    dz.topRows(h) = (dc * step.gg * step.gi * (1.0 - step.gi)).matrix();
    dz.middleRows(h, h) =
        (dc * c_before.array() * step.gf * (1.0 - step.gf)).matrix();
    dz.middleRows(2 * h, h) = (dc * step.gi * (1.0 - step.gg.square())).matrix();
    dz.bottomRows(h) = (dho * step.go * (1.0 - step.go)).matrix();

    grads.w_gates.noalias() += dz * step.zin.transpose();
    grads.b_gates.noalias() += dz.rowwise().sum();

    const Eigen::MatrixXd dzin = model.gate_weights().transpose() * dz;
    dh_next = dzin.bottomRows(h);
    dc_next = (dc * step.gf).matrix();
  }
  return loss_sum;
}

}  // namespace

Eigen::MatrixXd AsrModel::forward_log_probs(const FeatureFrames& features) const {
  const auto frames = features.frames.rows();
  if (frames < 1 || features.frames.cols() != input_dim_) {
    throw InvalidInputError("forward_log_probs: feature shape mismatch");
  }
  const int h = hidden_size_;
  Eigen::VectorXd hidden = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd cell = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd zin(input_dim_ + h);
  Eigen::MatrixXd log_probs(frames, vocab_.num_classes());

  for (Eigen::Index t = 0; t < frames; ++t) {
    zin.head(input_dim_) = features.frames.row(t).transpose();
    zin.tail(h) = hidden;
    Eigen::VectorXd z = w_gates_ * zin + b_gates_;
    const Eigen::ArrayXd gi = 1.0 / (1.0 + (-z.head(h).array()).exp());
    const Eigen::ArrayXd gf = 1.0 / (1.0 + (-z.segment(h, h).array()).exp());
    const Eigen::ArrayXd gg = z.segment(2 * h, h).array().tanh();
    const Eigen::ArrayXd go = 1.0 / (1.0 + (-z.tail(h).array()).exp());
    cell = (gf * cell.array() + gi * gg).matrix();
    hidden = (go * cell.array().tanh()).matrix();
    log_probs.row(t) = (w_out_ * hidden + b_out_).transpose();
  }
  log_softmax_rows(log_probs);
  return log_probs;
}

std::string greedy_decode(const Eigen::MatrixXd& log_probs, const Vocab& vocab) {
  if (log_probs.cols() != vocab.num_classes()) {
    throw InvalidInputError("greedy_decode: class count mismatch");
  }
  const int blank = vocab.blank_index();
  std::string out;
  int prev = -1;
  for (Eigen::Index t = 0; t < log_probs.rows(); ++t) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(log_probs.cols()); ++c) {
      if (log_probs(t, c) > log_probs(t, best)) best = c;  // ties keep lowest
    }
    if (best != prev && best != blank) {
      out.push_back(vocab.characters[static_cast<std::size_t>(best)]);
    }
    prev = best;
  }
  return out;
}

TrainResult train(const AsrModel& model, std::span<const Utterance> data, int epochs,
                  double learning_rate) {
  TrainOptions options;
  options.epochs = epochs;
  options.learning_rate = learning_rate;
  return train(model, data, options);
}

TrainResult train(const AsrModel& start, std::span<const Utterance> data,
                  const TrainOptions& options) {
  if (data.empty()) {
    throw InvalidInputError("train: dataset is empty");
  }
  if (options.epochs < 0) {
    throw InvalidInputError("train: epochs must be >= 0");
  }
  TrainResult result{start, {}, 0};
  if (options.epochs == 0) return result;
  if (!(options.learning_rate > 0.0)) {
    throw InvalidInputError("train: learning rate must be > 0");
  }
  if (options.zero_masks != nullptr && options.zero_masks->size() != 2) {
    throw InvalidInputError("train: zero_masks must hold {gate, output} masks");
  }

  AsrModel& model = result.model;

  // Features and targets are computed once up front; epochs reuse them.
  std::vector<FeatureFrames> feats(data.size());
  std::vector<std::vector<int>> targets(data.size());
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < data.size(); ++i) {
    feats[i] = extract_features(data[i].audio, model.frontend());
    const std::string normalized = normalize_text(data[i].transcript, model.vocab());
    if (normalized.empty()) {
      throw InvalidInputError("train: transcript of '" + data[i].id +
                              "' is empty after normalization");
    }
    targets[i] = model.vocab().encode(normalized);
    if (static_cast<std::size_t>(feats[i].frames.rows()) < ctc_min_frames(targets[i])) {
      ++result.skipped_infeasible;
      continue;
    }
    usable.push_back(i);
  }
  if (usable.empty()) {
    throw InvalidInputError("train: no utterance has an alignable target");
  }

  Gradients velocity(model);
  Rng shuffle_rng(derive_seed(model.hparams().seed, "asr.train.shuffle"));
  const int batch_size = std::max(1, model.hparams().batch_size);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = usable.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_rng() % i);
      std::swap(usable[i - 1], usable[j]);
    }

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < usable.size();
         begin += static_cast<std::size_t>(batch_size)) {
      const std::size_t end =
          std::min(usable.size(), begin + static_cast<std::size_t>(batch_size));
      std::vector<const FeatureFrames*> batch_feats;
      std::vector<const std::vector<int>*> batch_targets;
      for (std::size_t i = begin; i < end; ++i) {
        batch_feats.push_back(&feats[usable[i]]);
        batch_targets.push_back(&targets[usable[i]]);
      }

      Gradients grads(model);
      epoch_loss += batch_gradients(model, batch_feats, batch_targets, grads, nullptr);

      if (options.zero_masks != nullptr) {
        grads.w_gates = grads.w_gates.cwiseProduct((*options.zero_masks)[0]);
        grads.w_out = grads.w_out.cwiseProduct((*options.zero_masks)[1]);
      }
      const double norm = std::sqrt(grads.squared_norm());
      if (!std::isfinite(norm)) {
        throw TrainingDivergedError("train: non-finite gradient at epoch " +
                                    std::to_string(epoch));
      }
      const double clip = model.hparams().grad_clip;
      if (clip > 0.0 && norm > clip) grads.scale(clip / norm);

      const double mu = model.hparams().momentum;
      const double lr = options.learning_rate;
      velocity.w_gates = mu * velocity.w_gates - lr * grads.w_gates;
      velocity.b_gates = mu * velocity.b_gates - lr * grads.b_gates;
      velocity.w_out = mu * velocity.w_out - lr * grads.w_out;
      velocity.b_out = mu * velocity.b_out - lr * grads.b_out;
      model.gate_weights() += velocity.w_gates;
      model.gate_bias() += velocity.b_gates;
      model.output_weights() += velocity.w_out;
      model.output_bias() += velocity.b_out;
      if (options.zero_masks != nullptr) {
        model.gate_weights() =
            model.gate_weights().cwiseProduct((*options.zero_masks)[0]);
        model.output_weights() =
            model.output_weights().cwiseProduct((*options.zero_masks)[1]);
      }
    }

    epoch_loss /= static_cast<double>(usable.size());
    if (!std::isfinite(epoch_loss)) {
      throw TrainingDivergedError("train: loss diverged at epoch " + std::to_string(epoch));
    }
    result.epoch_loss.push_back(epoch_loss);
  }
  return result;
}

std::string predict(const AsrModel& model, const audio::AudioClip& clip) {
  const FeatureFrames feats = extract_features(clip, model.frontend());
  return greedy_decode(model.forward_log_probs(feats), model.vocab());
}

namespace {

constexpr char kCheckpointMagic[8] = {'W', 'M', 'C', 'K', 'P', 'T', '0', '1'};

void put_matrix(std::string& out, const Eigen::MatrixXd& m) {
  binio::put_u32(out, static_cast<std::uint32_t>(m.rows()));
  binio::put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) binio::put_f64(out, m(r, c));
  }
}

Eigen::MatrixXd read_matrix(binio::Reader& r) {
  const auto rows = static_cast<Eigen::Index>(r.u32());
  const auto cols = static_cast<Eigen::Index>(r.u32());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.f64();
  }
  return m;
}

}  // namespace

void save_checkpoint(const AsrModel& model, const std::filesystem::path& path) {
  std::string payload;
  binio::put_str(payload, model.vocab().characters);
  binio::put_f64(payload, model.frontend().frame_len_ms);
  binio::put_f64(payload, model.frontend().hop_ms);
  binio::put_u32(payload, static_cast<std::uint32_t>(model.frontend().num_filters));
  binio::put_u32(payload, static_cast<std::uint32_t>(model.frontend().fft_size));
  binio::put_f64(payload, model.hparams().learning_rate);
  binio::put_u32(payload, static_cast<std::uint32_t>(model.hparams().batch_size));
  binio::put_u64(payload, model.hparams().seed);
  binio::put_f64(payload, model.hparams().momentum);
  binio::put_f64(payload, model.hparams().grad_clip);
  binio::put_u32(payload, static_cast<std::uint32_t>(model.input_dim()));
  binio::put_u32(payload, static_cast<std::uint32_t>(model.hidden_size()));
  put_matrix(payload, model.gate_weights());
  put_matrix(payload, model.gate_bias());
  put_matrix(payload, model.output_weights());
  put_matrix(payload, model.output_bias());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("save_checkpoint: cannot open " + path.string());
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  std::string tail;
  binio::put_u64(tail, fnv1a64(payload.data(), payload.size()));
  out.write(tail.data(), static_cast<std::streamsize>(tail.size()));
  if (!out) throw FormatError("save_checkpoint: write failed for " + path.string());
}

AsrModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("load_checkpoint: cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kCheckpointMagic) + 8 ||
      std::memcmp(buf.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw FormatError("load_checkpoint: bad magic in " + path.string());
  }
  const std::string payload =
      buf.substr(sizeof(kCheckpointMagic), buf.size() - sizeof(kCheckpointMagic) - 8);
  binio::Reader tail(buf.substr(buf.size() - 8), "checkpoint hash");
  if (tail.u64() != fnv1a64(payload.data(), payload.size())) {
    throw FormatError("load_checkpoint: content hash mismatch in " + path.string());
  }

  binio::Reader r(payload, "checkpoint " + path.string());
  Vocab vocab;
  vocab.characters = r.str();
  FrontendConfig frontend;
  frontend.frame_len_ms = r.f64();
  frontend.hop_ms = r.f64();
  frontend.num_filters = static_cast<int>(r.u32());
  frontend.fft_size = static_cast<int>(r.u32());
  Hyperparams hp;
  hp.learning_rate = r.f64();
  hp.batch_size = static_cast<int>(r.u32());
  hp.seed = r.u64();
  hp.momentum = r.f64();
  hp.grad_clip = r.f64();
  const auto input_dim = static_cast<int>(r.u32());
  const auto hidden = static_cast<int>(r.u32());

  AsrModel model = AsrModel::init(vocab, frontend, hidden, hp);
  model.gate_weights() = read_matrix(r);
  model.gate_bias() = read_matrix(r);
  model.output_weights() = read_matrix(r);
  model.output_bias() = read_matrix(r);
  if (!r.done()) throw FormatError("load_checkpoint: trailing bytes in " + path.string());
  if (model.input_dim() != input_dim ||
      model.gate_weights().rows() != 4 * hidden ||
      model.gate_weights().cols() != input_dim + hidden ||
      model.gate_bias().size() != 4 * hidden ||
      model.output_weights().rows() != vocab.num_classes() ||
      model.output_weights().cols() != hidden ||
      model.output_bias().size() != vocab.num_classes()) {
    throw FormatError("load_checkpoint: inconsistent shapes in " + path.string());
  }
  return model;
}

std::vector<Utterance> read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw FormatError("read_manifest: cannot open " + manifest_path.string());
  const auto base = manifest_path.parent_path();
  std::vector<Utterance> utterances;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("read_manifest: missing tab at line " + std::to_string(line_no) +
                        " of " + manifest_path.string());
    }
    Utterance utt;
    const std::filesystem::path rel = line.substr(0, tab);
    utt.transcript = line.substr(tab + 1);
    utt.id = rel.stem().string();
    utt.audio = audio::read_wav(base / rel);
    utterances.push_back(std::move(utt));
  }
  return utterances;
}

void write_manifest(std::span<const Utterance> utterances,
                    const std::filesystem::path& audio_dir,
                    const std::filesystem::path& manifest_path) {
  std::filesystem::create_directories(audio_dir);
  std::ofstream out(manifest_path);
  if (!out) throw FormatError("write_manifest: cannot open " + manifest_path.string());
  const auto rel_dir = std::filesystem::relative(audio_dir, manifest_path.parent_path());
  for (const auto& utt : utterances) {
    const auto filename = utt.id + ".wav";
    audio::write_wav(utt.audio, audio_dir / filename);
    out << (rel_dir / filename).generic_string() << '\t' << utt.transcript << '\n';
  }
  if (!out) throw FormatError("write_manifest: write failed for " + manifest_path.string());
}

}  // namespace wmlab::asr
