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

// Speaker identification as constrained binary quadratic assignment.
//
// Each of the m turns of a session is assigned exactly one of l candidate
// characters. With a text reward A (m x m) and a vision reward B (l x m),
// an assignment x scores
//
//   f(x) = (1 - alpha) * sum_{i != j} A(i, j) [x_i == x_j]
//        +      alpha  * sum_i B(x_i, i)
//
// The diagonal of A would add the same constant trace(A) to every
// assignment and is left out. A is not symmetrized: the pair (i, j)
// contributes A(i, j) + A(j, i) when both turns share a speaker.
//
// Three solvers are provided. Enumeration and branch and bound are exact
// and return the lexicographically smallest optimal index sequence; they
// accumulate partial scores identically, so they agree bit for bit. Local
// search is a heuristic for instances too large for either.

#ifndef MMSPEAKER_SPEAKER_SOLVER_H_
#define MMSPEAKER_SPEAKER_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"
#include "mmspeaker/matrix.h"

namespace mmspeaker {

struct RewardInstance {
  std::vector<CharacterId> candidates;  // may be empty for raw instances
  Matrix text_reward;                   // A, m x m
  Matrix vision_reward;                 // B, l x m
  double alpha = 0.5;

  size_t num_turns() const { return vision_reward.cols(); }
  size_t num_candidates() const { return vision_reward.rows(); }

  absl::Status Validate() const;
};

enum class SolverMethod { kEnumeration, kBranchAndBound, kLocalSearch };

std::string SolverMethodName(SolverMethod method);
absl::StatusOr<SolverMethod> ParseSolverMethod(const std::string& name);

struct Assignment {
  std::vector<size_t> choice;  // candidate index per turn
  double objective = 0.0;
  SolverMethod method = SolverMethod::kEnumeration;
  // Search nodes visited (exact solvers) or improving moves (local search).
  int64_t work = 0;
};

// A = p - mean(p), mean over all entries including the diagonal.
Matrix BuildTextReward(const Matrix& p_sim);

// B(c, j) = highest speaking_prob among tracks of candidate c in turn j,
// 0 if c has no track there. Fails when a labelled track lacks a speaking
// probability or carries a label outside `candidates`.
absl::StatusOr<Matrix> BuildVisionReward(
    const Session& session, const std::vector<CharacterId>& candidates);

double Objective(const RewardInstance& inst, const std::vector<size_t>& choice);

inline constexpr int64_t kDefaultEnumerationBudget = 10'000'000;

// Exhaustive enumeration of all l^m assignments. ResourceExhausted when
// l^m exceeds the budget.
absl::StatusOr<Assignment> SolveExact(const RewardInstance& inst,
                                      int64_t budget = kDefaultEnumerationBudget);

// Depth-first branch and bound over turns in index order. The bound for a
// partial assignment adds, per unassigned turn, the best candidate's
// vision reward plus its pair rewards with assigned turns, and every
// positive pair reward among unassigned turns.
absl::StatusOr<Assignment> SolveBranchAndBound(const RewardInstance& inst);

struct LocalSearchOptions {
  uint64_t seed = 0;
  // Cap on improving moves per start.
  int max_iterations = 1000;
  // Extra starts from uniformly random assignments after the greedy one.
  int restarts = 0;
};

// Greedy start (per-turn argmax of B), then best-improvement single-turn
// reassignment until no move improves. Never returns less than the greedy
// start's objective.
absl::StatusOr<Assignment> SolveLocalSearch(const RewardInstance& inst,
                                            const LocalSearchOptions& options = {});

// Per-turn argmax of B, lowest index on ties.
std::vector<size_t> GreedyVisionChoice(const RewardInstance& inst);

struct IdentifyOptions {
  SolverMethod solver = SolverMethod::kBranchAndBound;
  int64_t budget = kDefaultEnumerationBudget;
  LocalSearchOptions local;
  // Drawn from uniformly when the session has no labelled faces.
  std::vector<CharacterId> fallback_roster;
  uint64_t seed = 0;
};

struct SpeakerPrediction {
  std::vector<CharacterId> speakers;
  std::optional<Assignment> assignment;  // unset when the fallback was used
  bool used_fallback = false;
};

// Builds the reward instance for one session and solves it. An empty
// `p_sim` means no text evidence (A = 0).
absl::StatusOr<SpeakerPrediction> IdentifySpeakers(const Session& session,
                                                   const Matrix& p_sim,
                                                   double alpha,
                                                   const IdentifyOptions& options);

// Solves every session with derived per-session seeds; `jobs` workers.
// Output order follows input order regardless of `jobs`.
absl::StatusOr<std::vector<SpeakerPrediction>> IdentifyCorpus(
    const std::vector<Session>& sessions, const std::vector<Matrix>& p_sims,
    double alpha, const IdentifyOptions& options, int jobs = 1);

// Micro-averaged exact-match accuracy over turns that have a gold speaker.
absl::StatusOr<double> Accuracy(
    const std::vector<std::vector<CharacterId>>& predictions,
    const std::vector<Session>& sessions);

absl::StatusOr<double> Accuracy(const std::vector<SpeakerPrediction>& predictions,
                                const std::vector<Session>& sessions);

// Uniform choice from the candidate set per turn (fallback roster when the
// set is empty); ignores both rewards.
absl::StatusOr<std::vector<std::vector<CharacterId>>> RandomBaseline(
    const std::vector<Session>& sessions,
    const std::vector<CharacterId>& fallback_roster, uint64_t seed);

// Expected accuracy of RandomBaseline: mean over gold-labelled turns of
// [gold in C] / |C|.
double ExpectedRandomAccuracy(const std::vector<Session>& sessions);

struct SweepPoint {
  double alpha = 0.0;
  double accuracy = 0.0;
};

absl::StatusOr<std::vector<SweepPoint>> AlphaSweep(
    const std::vector<Session>& sessions, const std::vector<Matrix>& p_sims,
    const std::vector<double>& grid, const IdentifyOptions& options,
    int jobs = 1);

// Picks the grid value with the best accuracy on a held-out fraction of
// `sessions` (at least one session), first grid value on ties.
absl::StatusOr<double> TuneAlpha(const std::vector<Session>& sessions,
                                 const std::vector<Matrix>& p_sims,
                                 const std::vector<double>& grid,
                                 const IdentifyOptions& options,
                                 double holdout_fraction = 0.1,
                                 uint64_t seed = 0);

}  // namespace mmspeaker

#endif  // MMSPEAKER_SPEAKER_SOLVER_H_
