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

// Pairwise same-speaker head over utterance embeddings.
//
// For utterance embeddings h_i (rows of an m x d matrix) the head computes
//
//   p(i, j) = sigmoid(w2 . gelu(W1 [h_i; h_j; |h_i - h_j|] + b1) + b2)
//
// for every ordered pair, including i == j. gelu is the exact erf form.
// The training objective is
//
//   L = mse_weight * mean((p - y)^2) + symmetry_weight * mean((p - p^T)^2)
//
// with both means over all m^2 entries.

#ifndef MMSPEAKER_SIMILARITY_HEAD_H_
#define MMSPEAKER_SIMILARITY_HEAD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"
#include "mmspeaker/matrix.h"

namespace mmspeaker {

struct HeadParams {
  Matrix w1;               // hidden x 3d
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;

  size_t input_dim() const { return w1.cols() / 3; }
  size_t hidden_dim() const { return w1.rows(); }

  static HeadParams Zeros(size_t input_dim, size_t hidden_dim);
  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  static HeadParams Initialize(size_t input_dim, size_t hidden_dim,
                               uint64_t seed);

  absl::Status Validate() const;

  // Flat view in the order w1 (row-major), b1, w2, b2.
  std::vector<double> Flatten() const;
  absl::Status Unflatten(const std::vector<double>& flat);
  size_t NumParameters() const;

  friend bool operator==(const HeadParams&, const HeadParams&) = default;
};

// Gradients share the parameter layout.
using HeadGradient = HeadParams;

struct LossWeights {
  double mse = 1.0;
  double symmetry = 1.0;
};

double Gelu(double x);
double GeluDerivative(double x);
double Sigmoid(double x);

// m x m matrix of same-speaker probabilities. Rows of `embeddings` are
// utterances.
absl::StatusOr<Matrix> HeadForward(const HeadParams& params,
                                   const Matrix& embeddings);

absl::StatusOr<double> HeadLoss(const Matrix& p, const Matrix& y,
                                const LossWeights& weights = {});

struct LossAndGradient {
  double loss = 0.0;
  HeadGradient gradient;
};

absl::StatusOr<LossAndGradient> HeadLossAndGradient(
    const HeadParams& params, const Matrix& embeddings, const Matrix& y,
    const LossWeights& weights = {});

// y(i, j) = 1 when turns i and j have the same labelled speaker; the
// diagonal is always 1.
Matrix SameSpeakerLabels(const Session& session);

// Fraction of entries where (p > threshold) agrees with y.
double PairwiseAccuracy(const Matrix& p, const Matrix& y, double threshold = 0.5);

struct HeadExample {
  Matrix embeddings;  // m x d
  Matrix labels;      // m x m
};

enum class Optimizer { kSgd, kAdam };

struct TrainConfig {
  size_t hidden_dim = 16;
  double learning_rate = 0.5;
  int epochs = 300;
  size_t batch_size = 8;
  uint64_t seed = 1;
  Optimizer optimizer = Optimizer::kSgd;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  LossWeights weights;
};

struct TrainResult {
  HeadParams params;
  // Mean per-example loss of each epoch, measured before that epoch's
  // updates are applied to each batch.
  std::vector<double> loss_trace;
};

absl::StatusOr<TrainResult> TrainHead(const std::vector<HeadExample>& dataset,
                                      const TrainConfig& config);

// As above, starting from `init` instead of a fresh initialization.
absl::StatusOr<TrainResult> TrainHead(const std::vector<HeadExample>& dataset,
                                      const TrainConfig& config,
                                      HeadParams init);

// JSON object {"input_dim", "hidden_dim", "w1", "b1", "w2", "b2"}.
std::string SerializeHeadParams(const HeadParams& params);
absl::StatusOr<HeadParams> ParseHeadParams(const std::string& text);

}  // namespace mmspeaker

#endif  // MMSPEAKER_SIMILARITY_HEAD_H_
