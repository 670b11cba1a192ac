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

#include "mmspeaker/corpus_stats.h"

#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "absl/strings/str_format.h"

namespace mmspeaker {
namespace {

bool HasLabelledTrack(const Turn& turn, const CharacterId& who) {
  for (const FaceTrack& track : turn.tracks)
    if (track.label && *track.label == who) return true;
  return false;
}

}  // namespace

size_t CountWords(std::string_view text) {
  size_t words = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

absl::StatusOr<CorpusStatistics> ComputeCorpusStatistics(
    const std::vector<Session>& sessions, const StatisticsOptions& options) {
  if (sessions.empty()) {
    return absl::InvalidArgumentError("statistics need at least one session");
  }
  if (!(options.frames_per_second > 0.0)) {
    return absl::InvalidArgumentError("frames_per_second must be positive");
  }
  CorpusStatistics stats;
  stats.num_sessions = sessions.size();

  // std::map keeps the result independent of session order.
  std::map<std::pair<std::string, double>, const Turn*> unique_turns;
  double speaker_total = 0.0;
  for (const Session& session : sessions) {
    std::set<CharacterId> speakers;
    for (const Turn& turn : session.turns) {
      unique_turns.emplace(std::make_pair(session.source_id, turn.start_time),
                           &turn);
      if (turn.speaker) speakers.insert(*turn.speaker);
    }
    speaker_total += static_cast<double>(speakers.size());

    for (const Turn& turn : session.turns) {
      if (!turn.speaker) continue;
      ++stats.labelled_turn_occurrences;
      if (!HasLabelledTrack(turn, *turn.speaker)) ++stats.absent_from_current;
      bool anywhere = false;
      for (const Turn& other : session.turns)
        anywhere = anywhere || HasLabelledTrack(other, *turn.speaker);
      if (!anywhere) ++stats.absent_from_session;
    }
  }
  stats.num_unique_turns = unique_turns.size();
  stats.speakers_per_session = speaker_total / static_cast<double>(sessions.size());

  size_t words = 0;
  size_t tracks = 0;
  double track_seconds = 0.0;
  for (const auto& [key, turn] : unique_turns) {
    words += CountWords(turn->utterance);
    tracks += turn->tracks.size();
    for (const FaceTrack& track : turn->tracks) {
      if (track.observations.empty()) continue;
      track_seconds +=
          static_cast<double>(track.last_frame() - track.first_frame() + 1) /
          options.frames_per_second;
    }
  }
  const double n_turns = static_cast<double>(unique_turns.size());
  stats.words_per_utterance = static_cast<double>(words) / n_turns;
  stats.tracks_per_clip = static_cast<double>(tracks) / n_turns;
  stats.seconds_per_track =
      tracks == 0 ? 0.0 : track_seconds / static_cast<double>(tracks);
  if (stats.labelled_turn_occurrences > 0) {
    const double denom = static_cast<double>(stats.labelled_turn_occurrences);
    stats.pct_not_in_current_clip =
        100.0 * static_cast<double>(stats.absent_from_current) / denom;
    stats.pct_not_in_all_clips =
        100.0 * static_cast<double>(stats.absent_from_session) / denom;
  }
  return stats;
}

std::string FormatStatistics(const CorpusStatistics& s) {
  std::string out;
  absl::StrAppendFormat(&out, "%-34s %zu\n", "# sessions", s.num_sessions);
  absl::StrAppendFormat(&out, "%-34s %zu\n", "# unique turns",
                        s.num_unique_turns);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "# words in utterance",
                        s.words_per_utterance);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "# speakers in each session",
                        s.speakers_per_session);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "# face tracks per clip",
                        s.tracks_per_clip);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "avg. secs per face track",
                        s.seconds_per_track);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "% speakers not in current clip",
                        s.pct_not_in_current_clip);
  absl::StrAppendFormat(&out, "%-34s %.2f\n", "% speakers not in all clips",
                        s.pct_not_in_all_clips);
  return out;
}

}  // namespace mmspeaker
