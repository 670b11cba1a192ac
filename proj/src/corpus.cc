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

#include "mmspeaker/corpus.h"

#include <cctype>
#include <cmath>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace mmspeaker {

std::string CharacterId::Normalize(std::string_view name) {
  return absl::AsciiStrToLower(absl::StripAsciiWhitespace(absl::string_view(name.data(), name.size())));
}

absl::StatusOr<CharacterId> CharacterId::Parse(std::string_view name) {
  CharacterId id(name);
  if (id.empty()) {
    return absl::InvalidArgumentError("character name is empty");
  }
  return id;
}

bool BoundingBox::IsValid() const {
  for (double v : {x_min, y_min, x_max, y_max}) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return x_min < x_max && y_min < y_max;
}

bool FaceTrack::ActiveAt(int frame) const {
  return !observations.empty() && first_frame() <= frame &&
         frame <= last_frame();
}

absl::Status ValidateTrack(const FaceTrack& track,
                           const ValidationOptions& options) {
  if (track.observations.empty()) {
    return absl::FailedPreconditionError("track has no observations");
  }
  std::optional<size_t> dim = options.embedding_dim;
  for (size_t i = 0; i < track.observations.size(); ++i) {
    const FaceObservation& obs = track.observations[i];
    if (obs.frame_index < 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("observations[", i, "]: negative frame_index"));
    }
    if (!obs.box.IsValid()) {
      return absl::FailedPreconditionError(
          absl::StrCat("observations[", i, "]: invalid box"));
    }
    if (i > 0) {
      const int step = obs.frame_index - track.observations[i - 1].frame_index;
      if (step <= 0) {
        return absl::FailedPreconditionError(absl::StrCat(
            "observations[", i, "]: frame indices not strictly increasing"));
      }
      if (options.max_frame_gap && step > *options.max_frame_gap) {
        return absl::FailedPreconditionError(
            absl::StrCat("observations[", i, "]: frame gap ", step,
                         " exceeds ", *options.max_frame_gap));
      }
    }
    if (obs.embedding) {
      if (!dim) dim = obs.embedding->size();
      if (obs.embedding->size() != *dim || obs.embedding->empty()) {
        return absl::FailedPreconditionError(
            absl::StrCat("observations[", i, "]: embedding dimension ",
                         obs.embedding->size(), ", expected ", *dim));
      }
      for (double v : *obs.embedding) {
        if (!std::isfinite(v)) {
          return absl::FailedPreconditionError(
              absl::StrCat("observations[", i, "]: non-finite embedding"));
        }
      }
    }
  }
  if (track.label) {
    if (track.label->empty()) {
      return absl::FailedPreconditionError("empty track label");
    }
    if (options.roster && !options.roster->contains(*track.label)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "track label '", track.label->name(), "' not in roster"));
    }
  }
  if (track.speaking_prob) {
    const double p = *track.speaking_prob;
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::FailedPreconditionError(
          absl::StrCat("speaking_prob ", p, " outside [0, 1]"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateTurn(const Turn& turn, const ValidationOptions& options) {
  if (turn.utterance.empty()) {
    return absl::FailedPreconditionError("empty utterance");
  }
  if (!std::isfinite(turn.start_time) || !std::isfinite(turn.end_time)) {
    return absl::FailedPreconditionError("non-finite timestamp");
  }
  if (turn.start_time > turn.end_time) {
    return absl::FailedPreconditionError(absl::StrCat(
        "end_time ", turn.end_time, " < start_time ", turn.start_time));
  }
  if (turn.speaker && turn.speaker->empty()) {
    return absl::FailedPreconditionError("empty speaker name");
  }
  if (turn.key_frame && *turn.key_frame < 0) {
    return absl::FailedPreconditionError("negative key_frame");
  }
  for (size_t t = 0; t < turn.tracks.size(); ++t) {
    absl::Status status = ValidateTrack(turn.tracks[t], options);
    if (!status.ok()) {
      return absl::Status(status.code(),
                          absl::StrCat("tracks[", t, "]: ", status.message()));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateSession(const Session& session,
                             const ValidationOptions& options) {
  if (session.turns.empty()) {
    return absl::FailedPreconditionError(
        absl::StrCat("session '", session.source_id, "' has no turns"));
  }
  // Embedding dimension must agree across the whole session.
  ValidationOptions local = options;
  if (!local.embedding_dim) {
    for (const Turn& turn : session.turns)
      for (const FaceTrack& track : turn.tracks)
        for (const FaceObservation& obs : track.observations)
          if (obs.embedding && !local.embedding_dim)
            local.embedding_dim = obs.embedding->size();
  }
  for (size_t i = 0; i < session.turns.size(); ++i) {
    absl::Status status = ValidateTurn(session.turns[i], local);
    if (!status.ok()) {
      return absl::Status(status.code(),
                          absl::StrCat("session '", session.source_id,
                                       "' turns[", i, "]: ", status.message()));
    }
    if (i > 0 &&
        session.turns[i].start_time < session.turns[i - 1].start_time) {
      return absl::FailedPreconditionError(
          absl::StrCat("session '", session.source_id, "' turns[", i,
                       "]: turns not ordered by start_time"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateScoreTable(const ScoreTable& table) {
  if (table.values.rows() != table.rows.size() ||
      table.values.cols() != table.cols.size()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "score table shape ", table.values.rows(), "x", table.values.cols(),
        " does not match ", table.rows.size(), " row and ", table.cols.size(),
        " column labels"));
  }
  if (!table.values.AllFinite()) {
    return absl::FailedPreconditionError("score table has non-finite entries");
  }
  return absl::OkStatus();
}

size_t CountLabelledTracks(const Session& session) {
  size_t n = 0;
  for (const Turn& turn : session.turns)
    for (const FaceTrack& track : turn.tracks)
      if (track.label) ++n;
  return n;
}

}  // namespace mmspeaker
