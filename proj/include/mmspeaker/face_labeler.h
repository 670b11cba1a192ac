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

// Prototype nearest-neighbour face labelling and label validation.

#ifndef MMSPEAKER_FACE_LABELER_H_
#define MMSPEAKER_FACE_LABELER_H_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

// Reference face embeddings per character.
class PrototypeBank {
 public:
  PrototypeBank() = default;

  // Fails on dimension mismatch or zero-norm vectors.
  absl::Status Add(const CharacterId& who, std::vector<double> embedding);

  const std::map<CharacterId, std::vector<std::vector<double>>>& prototypes()
      const {
    return prototypes_;
  }
  size_t dim() const { return dim_; }
  bool empty() const { return prototypes_.empty(); }

  // Rows are character names (one row per prototype), columns dimensions.
  static absl::StatusOr<PrototypeBank> FromScoreTable(const ScoreTable& table);
  ScoreTable ToScoreTable() const;

 private:
  std::map<CharacterId, std::vector<std::vector<double>>> prototypes_;
  size_t dim_ = 0;
};

absl::StatusOr<double> Cosine(std::span<const double> u,
                              std::span<const double> v);

struct LabelOptions {
  double threshold = 0.6;
  int top_k = 5;
};

// Mean of the top-k cosine similarities per character, pooling every
// (observation, prototype) pair of the track. Fewer than k pairs average
// what is available.
absl::StatusOr<std::map<CharacterId, double>> ScoreTrack(
    const FaceTrack& track, const PrototypeBank& bank, int top_k);

// Best-scoring character if its score exceeds the threshold; ties go to
// the lexicographically smallest name. Requires an embedding on every
// observation.
absl::StatusOr<std::optional<CharacterId>> LabelTrack(
    const FaceTrack& track, const PrototypeBank& bank,
    const LabelOptions& options = {});

struct LabelValidationReport {
  size_t matched_pairs = 0;
  size_t correct_pairs = 0;
  size_t unmatched_auto = 0;
  size_t unmatched_reference = 0;
  // correct / matched; 0 when nothing matched.
  double accuracy = 0.0;
};

// Matches labelled faces frame by frame: pairs with IoU > iou_match are
// taken greedily, highest IoU first, one-to-one within a frame. Unlabelled
// tracks are ignored.
absl::StatusOr<LabelValidationReport> ValidateLabels(
    std::span<const FaceTrack> automatic, std::span<const FaceTrack> reference,
    double iou_match = 0.5);

}  // namespace mmspeaker

#endif  // MMSPEAKER_FACE_LABELER_H_
