// Copyright 2026 The mmspeaker Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmspeaker/similarity_head.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mmspeaker/json_fields.h"
#include "mmspeaker/random.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {
namespace {

// Activations of one (i, j) pair, kept for the backward pass.
struct PairActivations {
  std::vector<double> x;  // 3d
  std::vector<double> u;  // hidden pre-activation
  std::vector<double> g;  // gelu(u)
  double p = 0.0;
};

void PairForward(const HeadParams& params, std::span<const double> hi,
                 std::span<const double> hj, PairActivations& act) {
  const size_t d = hi.size();
  const size_t hidden = params.hidden_dim();
  act.x.resize(3 * d);
  for (size_t k = 0; k < d; ++k) {
    act.x[k] = hi[k];
    act.x[d + k] = hj[k];
    act.x[2 * d + k] = std::abs(hi[k] - hj[k]);
  }
  act.u.resize(hidden);
  act.g.resize(hidden);
  double z = params.b2;
  for (size_t r = 0; r < hidden; ++r) {
    auto w = params.w1.row(r);
    double u = params.b1[r];
    for (size_t c = 0; c < act.x.size(); ++c) u += w[c] * act.x[c];
    act.u[r] = u;
    act.g[r] = Gelu(u);
    z += params.w2[r] * act.g[r];
  }
  act.p = Sigmoid(z);
}

absl::Status CheckInputs(const HeadParams& params, const Matrix& embeddings) {
  RETURN_IF_ERROR(params.Validate());
  if (embeddings.rows() == 0) {
    return absl::InvalidArgumentError("need at least one utterance");
  }
  if (embeddings.cols() != params.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("embedding dimension ", embeddings.cols(),
                     " does not match head input dimension ",
                     params.input_dim()));
  }
  if (!embeddings.AllFinite()) {
    return absl::InvalidArgumentError("non-finite embedding entries");
  }
  return absl::OkStatus();
}

void AddScaled(HeadParams& acc, const HeadParams& g, double scale) {
  auto a = acc.w1.data();
  auto b = g.w1.data();
  for (size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
  for (size_t i = 0; i < acc.b1.size(); ++i) acc.b1[i] += scale * g.b1[i];
  for (size_t i = 0; i < acc.w2.size(); ++i) acc.w2[i] += scale * g.w2[i];
  acc.b2 += scale * g.b2;
}

}  // namespace

double Gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double GeluDerivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

HeadParams HeadParams::Zeros(size_t input_dim, size_t hidden_dim) {
  HeadParams p;
  p.w1 = Matrix(hidden_dim, 3 * input_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2.assign(hidden_dim, 0.0);
  p.b2 = 0.0;
  return p;
}

HeadParams HeadParams::Initialize(size_t input_dim, size_t hidden_dim,
                                  uint64_t seed) {
  HeadParams p = Zeros(input_dim, hidden_dim);
  Rng rng(seed);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(3 * input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& w : p.w1.data()) w = rng.Uniform(-s1, s1);
  for (double& w : p.w2) w = rng.Uniform(-s2, s2);
  return p;
}

absl::Status HeadParams::Validate() const {
  if (w1.rows() == 0 || w1.cols() == 0 || w1.cols() % 3 != 0) {
    return absl::InvalidArgumentError("w1 must be hidden x 3d with d > 0");
  }
  if (b1.size() != w1.rows() || w2.size() != w1.rows()) {
    return absl::InvalidArgumentError("b1/w2 size must equal hidden dim");
  }
  const std::vector<double> flat = Flatten();
  for (double v : flat) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("non-finite head parameter");
    }
  }
  return absl::OkStatus();
}

size_t HeadParams::NumParameters() const {
  return w1.size() + b1.size() + w2.size() + 1;
}

std::vector<double> HeadParams::Flatten() const {
  std::vector<double> flat;
  flat.reserve(NumParameters());
  flat.insert(flat.end(), w1.data().begin(), w1.data().end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  return flat;
}

absl::Status HeadParams::Unflatten(const std::vector<double>& flat) {
  if (flat.size() != NumParameters()) {
    return absl::InvalidArgumentError("flat parameter size mismatch");
  }
  size_t k = 0;
  for (double& v : w1.data()) v = flat[k++];
  for (double& v : b1) v = flat[k++];
  for (double& v : w2) v = flat[k++];
  b2 = flat[k];
  return absl::OkStatus();
}

absl::StatusOr<Matrix> HeadForward(const HeadParams& params,
                                   const Matrix& embeddings) {
  RETURN_IF_ERROR(CheckInputs(params, embeddings));
  const size_t m = embeddings.rows();
  Matrix p(m, m);
  PairActivations act;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      PairForward(params, embeddings.row(i), embeddings.row(j), act);
      p(i, j) = act.p;
    }
  }
  return p;
}

absl::StatusOr<double> HeadLoss(const Matrix& p, const Matrix& y,
                                const LossWeights& weights) {
  if (p.rows() != p.cols() || p.rows() != y.rows() || p.cols() != y.cols() ||
      p.empty()) {
    return absl::InvalidArgumentError("loss needs equal square shapes");
  }
  const size_t m = p.rows();
  double fit = 0.0;
  double sym = 0.0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const double e = p(i, j) - y(i, j);
      const double s = p(i, j) - p(j, i);
      fit += e * e;
      sym += s * s;
    }
  }
  const double n = static_cast<double>(m * m);
  return weights.mse * fit / n + weights.symmetry * sym / n;
}

absl::StatusOr<LossAndGradient> HeadLossAndGradient(const HeadParams& params,
                                                    const Matrix& embeddings,
                                                    const Matrix& y,
                                                    const LossWeights& weights) {
  RETURN_IF_ERROR(CheckInputs(params, embeddings));
  const size_t m = embeddings.rows();
  if (y.rows() != m || y.cols() != m) {
    return absl::InvalidArgumentError("label matrix must be m x m");
  }
  const size_t hidden = params.hidden_dim();

  std::vector<PairActivations> acts(m * m);
  Matrix p(m, m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      PairForward(params, embeddings.row(i), embeddings.row(j), acts[i * m + j]);
      p(i, j) = acts[i * m + j].p;
    }
  }

  LossAndGradient out;
  ASSIGN_OR_RETURN(out.loss, HeadLoss(p, y, weights));
  out.gradient = HeadParams::Zeros(params.input_dim(), hidden);
  HeadGradient& grad = out.gradient;

  const double n = static_cast<double>(m * m);
  std::vector<double> du(hidden);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const PairActivations& a = acts[i * m + j];
      // d(p_ij - p_ji)^2 appears in both the (i, j) and (j, i) terms.
      const double dp = 2.0 * weights.mse * (p(i, j) - y(i, j)) / n +
                        4.0 * weights.symmetry * (p(i, j) - p(j, i)) / n;
      const double dz = dp * a.p * (1.0 - a.p);
      grad.b2 += dz;
      for (size_t r = 0; r < hidden; ++r) {
        grad.w2[r] += dz * a.g[r];
        du[r] = dz * params.w2[r] * GeluDerivative(a.u[r]);
        grad.b1[r] += du[r];
        auto gw = grad.w1.row(r);
        for (size_t c = 0; c < a.x.size(); ++c) gw[c] += du[r] * a.x[c];
      }
    }
  }
  return out;
}

Matrix SameSpeakerLabels(const Session& session) {
  const size_t m = session.turns.size();
  Matrix y(m, m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const auto& a = session.turns[i].speaker;
      const auto& b = session.turns[j].speaker;
      y(i, j) = (i == j || (a && b && *a == *b)) ? 1.0 : 0.0;
    }
  }
  return y;
}

double PairwiseAccuracy(const Matrix& p, const Matrix& y, double threshold) {
  if (p.empty()) return 0.0;
  size_t correct = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    const bool pred = p.data()[k] > threshold;
    const bool gold = y.data()[k] > 0.5;
    if (pred == gold) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(p.size());
}

absl::StatusOr<TrainResult> TrainHead(const std::vector<HeadExample>& dataset,
                                      const TrainConfig& config) {
  if (dataset.empty()) return absl::InvalidArgumentError("empty dataset");
  return TrainHead(dataset, config,
                   HeadParams::Initialize(dataset.front().embeddings.cols(),
                                          config.hidden_dim, config.seed));
}

absl::StatusOr<TrainResult> TrainHead(const std::vector<HeadExample>& dataset,
                                      const TrainConfig& config,
                                      HeadParams init) {
  if (dataset.empty()) return absl::InvalidArgumentError("empty dataset");
  if (config.batch_size == 0) {
    return absl::InvalidArgumentError("batch size must be positive");
  }
  if (config.epochs < 0 || !(config.learning_rate >= 0.0)) {
    return absl::InvalidArgumentError("invalid epochs or learning rate");
  }
  RETURN_IF_ERROR(init.Validate());

  TrainResult result;
  result.params = std::move(init);
  HeadParams& params = result.params;
  const size_t count = params.NumParameters();
  std::vector<double> first_moment(count, 0.0), second_moment(count, 0.0);
  int64_t adam_step = 0;

  // Separate stream from the initializer so the two draws never coincide.
  Rng rng(MixSeed(config.seed, 1));
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      HeadGradient batch_grad =
          HeadParams::Zeros(params.input_dim(), params.hidden_dim());
      for (size_t b = start; b < end; ++b) {
        const HeadExample& ex = dataset[order[b]];
        ASSIGN_OR_RETURN(LossAndGradient lg,
                         HeadLossAndGradient(params, ex.embeddings, ex.labels,
                                             config.weights));
        if (!std::isfinite(lg.loss)) {
          return absl::AbortedError(absl::StrFormat(
              "training diverged: non-finite loss at epoch %d, example %zu "
              "(learning rate %g)",
              epoch, order[b], config.learning_rate));
        }
        epoch_loss += lg.loss;
        AddScaled(batch_grad, lg.gradient, 1.0 / static_cast<double>(end - start));
      }

      if (config.optimizer == Optimizer::kSgd) {
        AddScaled(params, batch_grad, -config.learning_rate);
      } else {
        ++adam_step;
        std::vector<double> flat = params.Flatten();
        const std::vector<double> g = batch_grad.Flatten();
        const double c1 = 1.0 - std::pow(config.adam_beta1, adam_step);
        const double c2 = 1.0 - std::pow(config.adam_beta2, adam_step);
        for (size_t k = 0; k < count; ++k) {
          first_moment[k] = config.adam_beta1 * first_moment[k] +
                            (1.0 - config.adam_beta1) * g[k];
          second_moment[k] = config.adam_beta2 * second_moment[k] +
                             (1.0 - config.adam_beta2) * g[k] * g[k];
          flat[k] -= config.learning_rate * (first_moment[k] / c1) /
                     (std::sqrt(second_moment[k] / c2) + config.adam_epsilon);
        }
        RETURN_IF_ERROR(params.Unflatten(flat));
      }
      for (double v : params.Flatten()) {
        if (!std::isfinite(v)) {
          return absl::AbortedError(absl::StrFormat(
              "training diverged: non-finite parameters after epoch %d "
              "(learning rate %g)",
              epoch, config.learning_rate));
        }
      }
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(dataset.size()));
  }
  return result;
}

std::string SerializeHeadParams(const HeadParams& params) {
  Json j = Json::object();
  j["input_dim"] = params.input_dim();
  j["hidden_dim"] = params.hidden_dim();
  j["w1"] = std::vector<double>(params.w1.data().begin(), params.w1.data().end());
  j["b1"] = params.b1;
  j["w2"] = params.w2;
  j["b2"] = params.b2;
  return j.dump();
}

absl::StatusOr<HeadParams> ParseHeadParams(const std::string& text) {
  ASSIGN_OR_RETURN(Json j, ParseJsonLine(text));
  ASSIGN_OR_RETURN(int input_dim, RequiredField<int>(j, "input_dim"));
  ASSIGN_OR_RETURN(int hidden_dim, RequiredField<int>(j, "hidden_dim"));
  if (input_dim <= 0 || hidden_dim <= 0) {
    return absl::DataLossError("head dimensions must be positive");
  }
  HeadParams p = HeadParams::Zeros(static_cast<size_t>(input_dim),
                                   static_cast<size_t>(hidden_dim));
  ASSIGN_OR_RETURN(std::vector<double> w1, RequiredField<std::vector<double>>(j, "w1"));
  ASSIGN_OR_RETURN(p.b1, RequiredField<std::vector<double>>(j, "b1"));
  ASSIGN_OR_RETURN(p.w2, RequiredField<std::vector<double>>(j, "w2"));
  ASSIGN_OR_RETURN(p.b2, RequiredField<double>(j, "b2"));
  if (w1.size() != p.w1.size()) {
    return absl::DataLossError("field 'w1': wrong number of entries");
  }
  p.w1 = Matrix(p.w1.rows(), p.w1.cols(), std::move(w1));
  absl::Status valid = p.Validate();
  if (!valid.ok()) return absl::DataLossError(valid.message());
  return p;
}

}  // namespace mmspeaker
