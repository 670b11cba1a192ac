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

#include "mmspeaker/session_builder.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "mmspeaker/random.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {

absl::StatusOr<std::vector<Session>> SlideWindows(const Session& episode,
                                                  const Roster& roster,
                                                  const WindowOptions& options) {
  if (options.window_size < 1) {
    return absl::InvalidArgumentError("window size must be >= 1");
  }
  if (!(options.max_gap_seconds > 0.0)) {
    return absl::InvalidArgumentError("max gap must be positive");
  }
  const size_t n = episode.turns.size();
  const size_t m = static_cast<size_t>(options.window_size);
  if (n < m) return std::vector<Session>();

  // bad_speaker_prefix[i]: turns before i without a roster speaker.
  // bad_gap_prefix[i]: too-long gaps among the first i adjacent pairs.
  std::vector<int> bad_speaker_prefix(n + 1, 0);
  std::vector<int> bad_gap_prefix(n, 0);
  for (size_t i = 0; i < n; ++i) {
    const Turn& t = episode.turns[i];
    const bool ok = t.speaker && roster.contains(*t.speaker);
    bad_speaker_prefix[i + 1] = bad_speaker_prefix[i] + (ok ? 0 : 1);
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    const double gap =
        episode.turns[i + 1].start_time - episode.turns[i].end_time;
    bad_gap_prefix[i + 1] =
        bad_gap_prefix[i] + (gap < options.max_gap_seconds ? 0 : 1);
  }

  std::vector<Session> windows;
  for (size_t s = 0; s + m <= n; ++s) {
    const size_t e = s + m;  // exclusive
    if (bad_speaker_prefix[e] - bad_speaker_prefix[s] != 0) continue;
    // Gaps s..e-2 lie inside the window.
    if (bad_gap_prefix[e - 1] - bad_gap_prefix[s] != 0) continue;
    Session window;
    window.source_id = episode.source_id;
    window.turns.assign(episode.turns.begin() + static_cast<ptrdiff_t>(s),
                        episode.turns.begin() + static_cast<ptrdiff_t>(e));
    windows.push_back(std::move(window));
  }
  return windows;
}

std::vector<CharacterId> CandidateSet(const Session& session) {
  std::vector<CharacterId> out;
  std::set<CharacterId> seen;
  for (const Turn& turn : session.turns)
    for (const FaceTrack& track : turn.tracks)
      if (track.label && seen.insert(*track.label).second)
        out.push_back(*track.label);
  return out;
}

size_t NoisyRemovalCount(size_t labelled, double fraction) {
  return static_cast<size_t>(
      std::floor(fraction * static_cast<double>(labelled) + 1e-9));
}

absl::StatusOr<Session> MakeNoisy(const Session& session, double fraction,
                                  uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    return absl::InvalidArgumentError("noise fraction must be in [0, 1]");
  }
  std::vector<std::pair<size_t, size_t>> labelled;
  for (size_t t = 0; t < session.turns.size(); ++t)
    for (size_t k = 0; k < session.turns[t].tracks.size(); ++k)
      if (session.turns[t].tracks[k].label) labelled.emplace_back(t, k);

  const size_t remove = NoisyRemovalCount(labelled.size(), fraction);
  Rng rng(seed);
  std::vector<size_t> picks = rng.SampleWithoutReplacement(labelled.size(), remove);
  std::set<std::pair<size_t, size_t>> doomed;
  for (size_t p : picks) doomed.insert(labelled[p]);

  Session out = session;
  for (size_t t = 0; t < out.turns.size(); ++t) {
    std::vector<FaceTrack> kept;
    for (size_t k = 0; k < session.turns[t].tracks.size(); ++k)
      if (!doomed.contains({t, k})) kept.push_back(session.turns[t].tracks[k]);
    out.turns[t].tracks = std::move(kept);
  }
  return out;
}

absl::StatusOr<std::vector<Session>> MakeNoisyCorpus(
    const std::vector<Session>& sessions, double fraction, uint64_t seed) {
  std::vector<Session> out;
  out.reserve(sessions.size());
  for (size_t i = 0; i < sessions.size(); ++i) {
    ASSIGN_OR_RETURN(Session noisy, MakeNoisy(sessions[i], fraction, MixSeed(seed, i)));
    out.push_back(std::move(noisy));
  }
  return out;
}

}  // namespace mmspeaker
