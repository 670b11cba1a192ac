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

#ifndef MMSPEAKER_CORPUS_STATS_H_
#define MMSPEAKER_CORPUS_STATS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

// Dataset summary. Turn-level text and track quantities are averaged over
// unique turns, where overlapping windows are collapsed by the key
// (source_id, start_time). Speaker-presence percentages are computed per
// session occurrence of each speaker-labelled turn, since presence "in all
// clips" depends on the surrounding window.
struct CorpusStatistics {
  size_t num_sessions = 0;
  size_t num_unique_turns = 0;
  double words_per_utterance = 0.0;
  double speakers_per_session = 0.0;
  double tracks_per_clip = 0.0;
  double seconds_per_track = 0.0;
  // Counts behind the two percentages, kept for exact comparisons.
  size_t labelled_turn_occurrences = 0;
  size_t absent_from_current = 0;
  size_t absent_from_session = 0;
  double pct_not_in_current_clip = 0.0;
  double pct_not_in_all_clips = 0.0;
};

struct StatisticsOptions {
  // Frame rate used to convert track lengths to seconds.
  double frames_per_second = 25.0;
};

// Whitespace-delimited word count.
size_t CountWords(std::string_view text);

absl::StatusOr<CorpusStatistics> ComputeCorpusStatistics(
    const std::vector<Session>& sessions, const StatisticsOptions& options = {});

std::string FormatStatistics(const CorpusStatistics& stats);

}  // namespace mmspeaker

#endif  // MMSPEAKER_CORPUS_STATS_H_
