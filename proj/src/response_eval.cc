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

#include "mmspeaker/response_eval.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "mmspeaker/random.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {
namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string MatchCase(std::string_view original, const std::string& name) {
  bool has_lower = false;
  bool has_upper = false;
  for (char c : original) {
    has_lower = has_lower || std::islower(static_cast<unsigned char>(c));
    has_upper = has_upper || std::isupper(static_cast<unsigned char>(c));
  }
  if (has_upper && !has_lower && original.size() > 1) {
    return absl::AsciiStrToUpper(name);
  }
  std::string out = name;
  if (!out.empty() && std::isupper(static_cast<unsigned char>(original.front()))) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

absl::Status CheckRosterCovers(const Session& session,
                               const std::vector<CharacterId>& roster) {
  const std::set<CharacterId> names(roster.begin(), roster.end());
  for (size_t i = 0; i < session.turns.size(); ++i) {
    const auto& speaker = session.turns[i].speaker;
    if (speaker && !names.contains(*speaker)) {
      return absl::FailedPreconditionError(
          absl::StrCat("session '", session.source_id, "' turns[", i,
                       "]: speaker '", speaker->name(), "' not in roster"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<CandidateList>> BuildCandidates(
    const std::vector<Session>& sessions, size_t negatives, uint64_t seed) {
  std::vector<std::string> pool;
  std::unordered_map<std::string, size_t> position;
  for (const Session& session : sessions)
    for (const Turn& turn : session.turns)
      if (position.emplace(turn.utterance, pool.size()).second)
        pool.push_back(turn.utterance);

  std::vector<CandidateList> out;
  out.reserve(sessions.size());
  for (size_t s = 0; s < sessions.size(); ++s) {
    if (sessions[s].turns.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("session ", s, " is empty"));
    }
    const std::string& gold = sessions[s].turns.back().utterance;
    const size_t gold_pos = position.at(gold);
    if (pool.size() - 1 < negatives) {
      return absl::FailedPreconditionError(absl::StrCat(
          "utterance pool has ", pool.size() - 1, " negatives available, ",
          negatives, " requested"));
    }
    Rng rng(MixSeed(seed, s));
    // Eligible index e maps to pool index e, skipping the gold position.
    std::vector<size_t> picks = rng.SampleWithoutReplacement(pool.size() - 1, negatives);
    CandidateList list;
    list.id = absl::StrCat(s);
    list.candidates.push_back(gold);
    for (size_t e : picks) list.candidates.push_back(pool[e < gold_pos ? e : e + 1]);
    std::vector<size_t> order(list.candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.Shuffle(order);
    std::vector<std::string> shuffled;
    shuffled.reserve(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
      shuffled.push_back(list.candidates[order[i]]);
      if (order[i] == 0) list.gold_index = i;
    }
    list.candidates = std::move(shuffled);
    out.push_back(std::move(list));
  }
  return out;
}

std::vector<ScoreTable> CandidatesToTables(const std::vector<CandidateList>& lists) {
  std::vector<ScoreTable> tables;
  tables.reserve(lists.size());
  for (const CandidateList& list : lists) {
    ScoreTable t;
    t.id = list.id;
    t.rows = list.candidates;
    t.cols = {"is_gold"};
    t.values = Matrix(list.candidates.size(), 1, 0.0);
    t.values(list.gold_index, 0) = 1.0;
    tables.push_back(std::move(t));
  }
  return tables;
}

absl::StatusOr<std::vector<CandidateList>> CandidatesFromTables(
    const std::vector<ScoreTable>& tables) {
  std::vector<CandidateList> out;
  for (size_t k = 0; k < tables.size(); ++k) {
    const ScoreTable& t = tables[k];
    if (t.cols.size() != 1 || t.rows.empty()) {
      return absl::DataLossError(
          absl::StrCat("candidate table ", k, ": expected one 'is_gold' column"));
    }
    CandidateList list;
    list.id = t.id.value_or(absl::StrCat(k));
    list.candidates = t.rows;
    size_t golds = 0;
    for (size_t r = 0; r < t.rows.size(); ++r) {
      if (t.values(r, 0) == 1.0) {
        list.gold_index = r;
        ++golds;
      }
    }
    if (golds != 1) {
      return absl::DataLossError(
          absl::StrCat("candidate table ", k, ": expected exactly one gold row"));
    }
    out.push_back(std::move(list));
  }
  return out;
}

absl::StatusOr<PerturbMode> ParsePerturbMode(std::string_view name) {
  if (name == "none") return PerturbMode::kNone;
  if (name == "random") return PerturbMode::kRandom;
  if (name == "random_history") return PerturbMode::kRandomHistory;
  if (name == "shuffled") return PerturbMode::kShuffled;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown perturbation mode '", std::string(name),
      "' (expected none, random, random_history, shuffled)"));
}

std::string PerturbModeName(PerturbMode mode) {
  switch (mode) {
    case PerturbMode::kNone:
      return "none";
    case PerturbMode::kRandom:
      return "random";
    case PerturbMode::kRandomHistory:
      return "random_history";
    case PerturbMode::kShuffled:
      return "shuffled";
  }
  return "unknown";
}

absl::StatusOr<NameMapping> MakeShuffleMapping(
    const std::vector<CharacterId>& roster, uint64_t seed) {
  std::vector<CharacterId> names(roster.begin(), roster.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.size() < 2) {
    return absl::InvalidArgumentError(
        "shuffled names need a roster of at least two characters");
  }
  Rng rng(seed);
  std::vector<CharacterId> image = names;
  do {
    rng.Shuffle(image);
  } while (image == names);
  NameMapping mapping;
  for (size_t i = 0; i < names.size(); ++i) mapping.emplace(names[i], image[i]);
  return mapping;
}

NameMapping InvertMapping(const NameMapping& mapping) {
  NameMapping inverse;
  for (const auto& [from, to] : mapping) inverse.emplace(to, from);
  return inverse;
}

std::string ReplaceNames(std::string_view text, const NameMapping& mapping) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (!IsWordChar(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordChar(text[j])) ++j;
    const std::string_view word = text.substr(i, j - i);
    auto it = mapping.find(CharacterId(word));
    if (it != mapping.end()) {
      out += MatchCase(word, it->second.name());
    } else {
      out.append(word);
    }
    i = j;
  }
  return out;
}

Session ApplyNameMapping(const Session& session, const NameMapping& mapping) {
  Session out = session;
  for (Turn& turn : out.turns) {
    if (turn.speaker) {
      auto it = mapping.find(*turn.speaker);
      if (it != mapping.end()) turn.speaker = it->second;
    }
    turn.utterance = ReplaceNames(turn.utterance, mapping);
  }
  return out;
}

absl::StatusOr<Session> PerturbSpeakers(const Session& session, PerturbMode mode,
                                        uint64_t seed,
                                        const std::vector<CharacterId>& roster) {
  if (mode == PerturbMode::kNone) return session;
  RETURN_IF_ERROR(CheckRosterCovers(session, roster));
  if (roster.empty()) return absl::InvalidArgumentError("empty roster");
  if (mode == PerturbMode::kShuffled) {
    ASSIGN_OR_RETURN(NameMapping mapping, MakeShuffleMapping(roster, seed));
    return ApplyNameMapping(session, mapping);
  }
  Session out = session;
  Rng rng(seed);
  const size_t m = out.turns.size();
  for (size_t i = 0; i < m; ++i) {
    if (mode == PerturbMode::kRandomHistory && i + 1 == m) break;
    out.turns[i].speaker = roster[rng.UniformInt(roster.size())];
  }
  return out;
}

absl::StatusOr<std::vector<Session>> PerturbCorpus(
    const std::vector<Session>& sessions, PerturbMode mode, uint64_t seed,
    const std::vector<CharacterId>& roster) {
  std::vector<Session> out;
  out.reserve(sessions.size());
  if (mode == PerturbMode::kShuffled) {
    ASSIGN_OR_RETURN(NameMapping mapping, MakeShuffleMapping(roster, seed));
    for (const Session& s : sessions) {
      RETURN_IF_ERROR(CheckRosterCovers(s, roster));
      out.push_back(ApplyNameMapping(s, mapping));
    }
    return out;
  }
  for (size_t i = 0; i < sessions.size(); ++i) {
    ASSIGN_OR_RETURN(Session p,
                     PerturbSpeakers(sessions[i], mode, MixSeed(seed, i), roster));
    out.push_back(std::move(p));
  }
  return out;
}

absl::StatusOr<std::vector<size_t>> SelectByScore(const ScoreTable& scores) {
  const Matrix& v = scores.values;
  if (v.rows() != scores.rows.size() || v.cols() != scores.cols.size()) {
    return absl::InvalidArgumentError("score table shape mismatch");
  }
  if (v.cols() == 0) return absl::InvalidArgumentError("no candidate scores");
  std::vector<size_t> out;
  out.reserve(v.rows());
  for (size_t r = 0; r < v.rows(); ++r) {
    size_t best = 0;
    for (size_t c = 0; c < v.cols(); ++c) {
      if (!std::isfinite(v(r, c))) {
        return absl::InvalidArgumentError(
            absl::StrCat("item ", r, " candidate ", c, ": missing score"));
      }
      if (v(r, c) < v(r, best)) best = c;
    }
    out.push_back(best);
  }
  return out;
}

absl::StatusOr<double> SelectionAccuracy(const std::vector<size_t>& choices,
                                         const std::vector<size_t>& gold) {
  if (choices.size() != gold.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        choices.size(), " choices for ", gold.size(), " items"));
  }
  if (choices.empty()) return 0.0;
  size_t correct = 0;
  for (size_t i = 0; i < choices.size(); ++i)
    if (choices[i] == gold[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(choices.size());
}

}  // namespace mmspeaker
