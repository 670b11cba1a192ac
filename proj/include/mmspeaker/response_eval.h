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

// Response selection: build one-positive-plus-negatives candidate lists,
// perturb speaker information, and score externally computed perplexities.

#ifndef MMSPEAKER_RESPONSE_EVAL_H_
#define MMSPEAKER_RESPONSE_EVAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

struct CandidateList {
  std::string id;
  std::vector<std::string> candidates;
  size_t gold_index = 0;
};

// For each session, its last utterance plus `negatives` other utterances
// drawn without replacement from the distinct utterances of the whole
// corpus (strings equal to the gold one excluded), in shuffled order.
// Session i uses MixSeed(seed, i); ids are session indices.
absl::StatusOr<std::vector<CandidateList>> BuildCandidates(
    const std::vector<Session>& sessions, size_t negatives, uint64_t seed);

// Candidate file tables: rows are candidate texts, one column "is_gold".
std::vector<ScoreTable> CandidatesToTables(const std::vector<CandidateList>& lists);
absl::StatusOr<std::vector<CandidateList>> CandidatesFromTables(
    const std::vector<ScoreTable>& tables);

enum class PerturbMode { kNone, kRandom, kRandomHistory, kShuffled };

absl::StatusOr<PerturbMode> ParsePerturbMode(std::string_view name);
std::string PerturbModeName(PerturbMode mode);

using NameMapping = std::map<CharacterId, CharacterId>;

// Seeded permutation of the roster other than the identity. Needs at least
// two names.
absl::StatusOr<NameMapping> MakeShuffleMapping(
    const std::vector<CharacterId>& roster, uint64_t seed);

NameMapping InvertMapping(const NameMapping& mapping);

// Replaces whole-word, case-insensitive occurrences of mapped names. The
// replacement is all caps when the original word is, capitalized when its
// first letter is upper case, and lower case otherwise.
std::string ReplaceNames(std::string_view text, const NameMapping& mapping);

// Remaps speaker labels and names in utterance text; leaves everything
// else untouched.
Session ApplyNameMapping(const Session& session, const NameMapping& mapping);

// kRandom redraws every speaker uniformly from the roster, kRandomHistory
// does the same except for the last turn, kShuffled applies
// MakeShuffleMapping(roster, seed). Fails if a speaker is missing from the
// roster.
absl::StatusOr<Session> PerturbSpeakers(const Session& session, PerturbMode mode,
                                        uint64_t seed,
                                        const std::vector<CharacterId>& roster);

// Corpus version. Random modes use MixSeed(seed, i) per session; the
// shuffled mode applies one mapping to every session.
absl::StatusOr<std::vector<Session>> PerturbCorpus(
    const std::vector<Session>& sessions, PerturbMode mode, uint64_t seed,
    const std::vector<CharacterId>& roster);

// Per row, the column with the lowest score; lowest index on ties.
absl::StatusOr<std::vector<size_t>> SelectByScore(const ScoreTable& scores);

absl::StatusOr<double> SelectionAccuracy(const std::vector<size_t>& choices,
                                         const std::vector<size_t>& gold);

}  // namespace mmspeaker

#endif  // MMSPEAKER_RESPONSE_EVAL_H_
