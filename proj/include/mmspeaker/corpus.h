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

// Shared data model: dialogue sessions, turns, face tracks and score tables.
//
// A Session is a window of consecutive dialogue turns cut from one source
// (an episode). Each turn carries the face tracks detected in its video clip;
// tracks may be labelled with a character and scored with the probability
// that the face is speaking. All types are plain values.

#ifndef MMSPEAKER_CORPUS_H_
#define MMSPEAKER_CORPUS_H_

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/matrix.h"

namespace mmspeaker {

// Canonical character name: surrounding whitespace trimmed, ASCII lowercase.
class CharacterId {
 public:
  CharacterId() = default;
  explicit CharacterId(std::string_view name) : name_(Normalize(name)) {}

  // Fails on names that normalize to the empty string.
  static absl::StatusOr<CharacterId> Parse(std::string_view name);
  static std::string Normalize(std::string_view name);

  const std::string& name() const { return name_; }
  bool empty() const { return name_.empty(); }

  friend auto operator<=>(const CharacterId&, const CharacterId&) = default;

 private:
  std::string name_;
};

using Roster = std::set<CharacterId>;

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double Width() const { return x_max - x_min; }
  double Height() const { return y_max - y_min; }
  double Area() const { return Width() * Height(); }
  bool IsValid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct FaceObservation {
  int frame_index = 0;
  BoundingBox box;
  std::optional<std::vector<double>> embedding;

  friend bool operator==(const FaceObservation&,
                         const FaceObservation&) = default;
};

struct FaceTrack {
  std::vector<FaceObservation> observations;
  std::optional<CharacterId> label;
  // Probability that this face is the active speaker, from an external
  // visual model.
  std::optional<double> speaking_prob;

  int first_frame() const { return observations.front().frame_index; }
  int last_frame() const { return observations.back().frame_index; }
  bool ActiveAt(int frame) const;

  friend bool operator==(const FaceTrack&, const FaceTrack&) = default;
};

struct Turn {
  std::string utterance;
  std::optional<CharacterId> speaker;
  double start_time = 0.0;
  double end_time = 0.0;
  std::vector<FaceTrack> tracks;
  std::optional<int> key_frame;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Session {
  std::string source_id;
  std::vector<Turn> turns;

  size_t size() const { return turns.size(); }

  friend bool operator==(const Session&, const Session&) = default;
};

// Generic labelled real matrix used for every externally computed table
// (speaking probabilities, similarity matrices, embeddings, prototypes,
// candidate perplexities). `id` ties a table to a session when a file holds
// one table per session.
struct ScoreTable {
  std::optional<std::string> id;
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  Matrix values;

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

struct ValidationOptions {
  // Largest allowed step between consecutive frames of a track; unset
  // accepts any strictly increasing sequence.
  std::optional<int> max_frame_gap;
  // Required embedding dimension; unset requires only that all embeddings
  // within one session agree.
  std::optional<size_t> embedding_dim;
  // When set, every track label and speaker must belong to it.
  const Roster* roster = nullptr;
};

absl::Status ValidateTrack(const FaceTrack& track,
                           const ValidationOptions& options = {});
absl::Status ValidateTurn(const Turn& turn,
                          const ValidationOptions& options = {});
absl::Status ValidateSession(const Session& session,
                             const ValidationOptions& options = {});
absl::Status ValidateScoreTable(const ScoreTable& table);

// Number of labelled tracks across all turns.
size_t CountLabelledTracks(const Session& session);

}  // namespace mmspeaker

#endif  // MMSPEAKER_CORPUS_H_
