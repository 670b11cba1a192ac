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

#ifndef MMSPEAKER_SESSION_BUILDER_H_
#define MMSPEAKER_SESSION_BUILDER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

struct WindowOptions {
  int window_size = 5;
  // Every gap between adjacent turns (next start minus previous end) must be
  // strictly below this.
  double max_gap_seconds = 8.0;
};

// All windows of `window_size` consecutive turns whose speakers are all in
// the roster and whose inter-turn gaps are all short enough. Windows
// overlap freely and keep the episode's source_id.
absl::StatusOr<std::vector<Session>> SlideWindows(const Session& episode,
                                                  const Roster& roster,
                                                  const WindowOptions& options);

// Labels of every labelled track in the session, in order of first
// appearance (turn order, then track order). May be empty.
std::vector<CharacterId> CandidateSet(const Session& session);

// Removes floor(fraction * L) of the session's L labelled tracks, chosen
// uniformly without replacement by a generator seeded with `seed`.
absl::StatusOr<Session> MakeNoisy(const Session& session, double fraction,
                                  uint64_t seed);

// Per-session version; session i uses MixSeed(seed, i).
absl::StatusOr<std::vector<Session>> MakeNoisyCorpus(
    const std::vector<Session>& sessions, double fraction, uint64_t seed);

// floor(fraction * labelled), robust to representation error in fraction.
size_t NoisyRemovalCount(size_t labelled, double fraction);

}  // namespace mmspeaker

#endif  // MMSPEAKER_SESSION_BUILDER_H_
