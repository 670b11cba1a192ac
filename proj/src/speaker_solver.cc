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

#include "mmspeaker/speaker_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "absl/strings/str_cat.h"
#include "mmspeaker/parallel.h"
#include "mmspeaker/random.h"
#include "mmspeaker/session_builder.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Slack for comparing a bound computed along a different summation order
// against leaf values; far below any meaningful reward difference.
constexpr double kBoundSlack = 1e-9;
constexpr double kImprovementEps = 1e-12;

// S(i, j) = A(i, j) + A(j, i): the reward for turns i and j sharing a
// speaker.
Matrix PairWeights(const RewardInstance& inst) {
  const size_t m = inst.num_turns();
  Matrix s(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      if (i != j) s(i, j) = inst.text_reward(i, j) + inst.text_reward(j, i);
  return s;
}

// Depth-first search over turns in index order, candidates in index order.
// Leaves are reached in lexicographic order and only a strictly better leaf
// replaces the incumbent, so the result is the lexicographically smallest
// optimum. With pruning disabled this is plain enumeration.
class TreeSearch {
 public:
  TreeSearch(const RewardInstance& inst, bool prune)
      : inst_(inst),
        m_(inst.num_turns()),
        l_(inst.num_candidates()),
        alpha_(inst.alpha),
        prune_(prune),
        pairs_(PairWeights(inst)),
        positive_tail_(m_ + 1, 0.0),
        choice_(m_, 0) {
    for (size_t k = m_; k-- > 0;) {
      double row = 0.0;
      for (size_t j = k + 1; j < m_; ++j) row += std::max(0.0, pairs_(k, j));
      positive_tail_[k] = positive_tail_[k + 1] + row;
    }
  }

  Assignment Run() {
    Visit(0, 0.0, 0.0);
    Assignment out;
    out.choice = best_choice_;
    out.objective = Objective(inst_, best_choice_);
    out.method = prune_ ? SolverMethod::kBranchAndBound
                        : SolverMethod::kEnumeration;
    out.work = nodes_;
    return out;
  }

 private:
  double Value(double linear, double quadratic) const {
    return (1.0 - alpha_) * quadratic + alpha_ * linear;
  }

  // Upper bound on what turns k..m-1 can still add.
  double RemainingBound(size_t k) const {
    double total = 0.0;
    for (size_t i = k; i < m_; ++i) {
      double best = kNegInf;
      for (size_t c = 0; c < l_; ++c) {
        double shared = 0.0;
        for (size_t j = 0; j < k; ++j)
          if (choice_[j] == c) shared += pairs_(j, i);
        best = std::max(best, alpha_ * inst_.vision_reward(c, i) +
                                  (1.0 - alpha_) * shared);
      }
      total += best;
    }
    return total + (1.0 - alpha_) * positive_tail_[k];
  }

  void Visit(size_t k, double linear, double quadratic) {
    ++nodes_;
    if (k == m_) {
      const double v = Value(linear, quadratic);
      if (v > best_) {
        best_ = v;
        best_choice_ = choice_;
      }
      return;
    }
    if (prune_ && best_ > kNegInf &&
        Value(linear, quadratic) + RemainingBound(k) < best_ - kBoundSlack) {
      return;
    }
    for (size_t c = 0; c < l_; ++c) {
      choice_[k] = c;
      double shared = 0.0;
      for (size_t j = 0; j < k; ++j)
        if (choice_[j] == c) shared += pairs_(j, k);
      Visit(k + 1, linear + inst_.vision_reward(c, k), quadratic + shared);
    }
  }

  const RewardInstance& inst_;
  const size_t m_;
  const size_t l_;
  const double alpha_;
  const bool prune_;
  const Matrix pairs_;
  std::vector<double> positive_tail_;
  std::vector<size_t> choice_;
  std::vector<size_t> best_choice_;
  double best_ = kNegInf;
  int64_t nodes_ = 0;
};

// Best-improvement descent from `choice`; returns the number of moves.
int64_t Descend(const RewardInstance& inst, const Matrix& pairs,
                std::vector<size_t>& choice, int max_iterations) {
  const size_t m = inst.num_turns();
  const size_t l = inst.num_candidates();
  const double alpha = inst.alpha;
  int64_t moves = 0;
  for (int it = 0; it < max_iterations; ++it) {
    double best_delta = kImprovementEps;
    size_t best_turn = m;
    size_t best_cand = 0;
    for (size_t i = 0; i < m; ++i) {
      const size_t cur = choice[i];
      for (size_t c = 0; c < l; ++c) {
        if (c == cur) continue;
        double quad = 0.0;
        for (size_t j = 0; j < m; ++j) {
          if (j == i) continue;
          if (choice[j] == c) quad += pairs(i, j);
          if (choice[j] == cur) quad -= pairs(i, j);
        }
        const double delta =
            alpha * (inst.vision_reward(c, i) - inst.vision_reward(cur, i)) +
            (1.0 - alpha) * quad;
        if (delta > best_delta) {
          best_delta = delta;
          best_turn = i;
          best_cand = c;
        }
      }
    }
    if (best_turn == m) break;
    choice[best_turn] = best_cand;
    ++moves;
  }
  return moves;
}

}  // namespace

std::string SolverMethodName(SolverMethod method) {
  switch (method) {
    case SolverMethod::kEnumeration:
      return "exact";
    case SolverMethod::kBranchAndBound:
      return "bnb";
    case SolverMethod::kLocalSearch:
      return "local";
  }
  return "unknown";
}

absl::StatusOr<SolverMethod> ParseSolverMethod(const std::string& name) {
  if (name == "exact") return SolverMethod::kEnumeration;
  if (name == "bnb") return SolverMethod::kBranchAndBound;
  if (name == "local") return SolverMethod::kLocalSearch;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown solver '", name, "' (expected exact, bnb, local)"));
}

absl::Status RewardInstance::Validate() const {
  const size_t m = num_turns();
  const size_t l = num_candidates();
  if (m == 0 || l == 0) {
    return absl::InvalidArgumentError("instance needs >= 1 turn and candidate");
  }
  if (text_reward.rows() != m || text_reward.cols() != m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "text reward is ", text_reward.rows(), "x", text_reward.cols(),
        ", expected ", m, "x", m));
  }
  if (!candidates.empty() && candidates.size() != l) {
    return absl::InvalidArgumentError("candidate list does not match B rows");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError("alpha must be in [0, 1]");
  }
  if (!text_reward.AllFinite() || !vision_reward.AllFinite()) {
    return absl::InvalidArgumentError("non-finite reward entries");
  }
  return absl::OkStatus();
}

Matrix BuildTextReward(const Matrix& p_sim) {
  Matrix a = p_sim;
  const double mean = p_sim.Mean();
  for (double& v : a.data()) v -= mean;
  return a;
}

absl::StatusOr<Matrix> BuildVisionReward(
    const Session& session, const std::vector<CharacterId>& candidates) {
  std::map<CharacterId, size_t> index;
  for (size_t c = 0; c < candidates.size(); ++c) index.emplace(candidates[c], c);
  Matrix b(candidates.size(), session.turns.size(), 0.0);
  for (size_t j = 0; j < session.turns.size(); ++j) {
    for (const FaceTrack& track : session.turns[j].tracks) {
      if (!track.label) continue;
      auto it = index.find(*track.label);
      if (it == index.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "turn ", j, ": track label '", track.label->name(),
            "' is not a candidate"));
      }
      if (!track.speaking_prob) {
        return absl::FailedPreconditionError(absl::StrCat(
            "turn ", j, ": labelled track '", track.label->name(),
            "' has no speaking_prob"));
      }
      b(it->second, j) = std::max(b(it->second, j), *track.speaking_prob);
    }
  }
  return b;
}

double Objective(const RewardInstance& inst, const std::vector<size_t>& choice) {
  const size_t m = inst.num_turns();
  double quadratic = 0.0;
  double linear = 0.0;
  for (size_t i = 0; i < m; ++i) {
    linear += inst.vision_reward(choice[i], i);
    for (size_t j = 0; j < m; ++j)
      if (i != j && choice[i] == choice[j]) quadratic += inst.text_reward(i, j);
  }
  return (1.0 - inst.alpha) * quadratic + inst.alpha * linear;
}

absl::StatusOr<Assignment> SolveExact(const RewardInstance& inst,
                                      int64_t budget) {
  RETURN_IF_ERROR(inst.Validate());
  const double space = std::pow(static_cast<double>(inst.num_candidates()),
                                static_cast<double>(inst.num_turns()));
  if (space > static_cast<double>(budget)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "enumeration needs ", inst.num_candidates(), "^", inst.num_turns(),
        " assignments, budget is ", budget));
  }
  return TreeSearch(inst, /*prune=*/false).Run();
}

absl::StatusOr<Assignment> SolveBranchAndBound(const RewardInstance& inst) {
  RETURN_IF_ERROR(inst.Validate());
  return TreeSearch(inst, /*prune=*/true).Run();
}

std::vector<size_t> GreedyVisionChoice(const RewardInstance& inst) {
  std::vector<size_t> choice(inst.num_turns(), 0);
  for (size_t i = 0; i < inst.num_turns(); ++i) {
    double best = kNegInf;
    for (size_t c = 0; c < inst.num_candidates(); ++c) {
      if (inst.vision_reward(c, i) > best) {
        best = inst.vision_reward(c, i);
        choice[i] = c;
      }
    }
  }
  return choice;
}

absl::StatusOr<Assignment> SolveLocalSearch(const RewardInstance& inst,
                                            const LocalSearchOptions& options) {
  RETURN_IF_ERROR(inst.Validate());
  if (options.max_iterations < 1) {
    return absl::InvalidArgumentError("max_iterations must be >= 1");
  }
  const Matrix pairs = PairWeights(inst);
  Assignment best;
  best.method = SolverMethod::kLocalSearch;
  best.choice = GreedyVisionChoice(inst);
  best.work = Descend(inst, pairs, best.choice, options.max_iterations);
  best.objective = Objective(inst, best.choice);

  Rng rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<size_t> choice(inst.num_turns());
    for (size_t& c : choice) c = rng.UniformInt(inst.num_candidates());
    const int64_t moves = Descend(inst, pairs, choice, options.max_iterations);
    const double value = Objective(inst, choice);
    best.work += moves;
    if (value > best.objective + kImprovementEps) {
      best.objective = value;
      best.choice = std::move(choice);
    }
  }
  return best;
}

absl::StatusOr<SpeakerPrediction> IdentifySpeakers(const Session& session,
                                                   const Matrix& p_sim,
                                                   double alpha,
                                                   const IdentifyOptions& options) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError("alpha must be in [0, 1]");
  }
  const size_t m = session.turns.size();
  SpeakerPrediction out;
  const std::vector<CharacterId> candidates = CandidateSet(session);
  if (candidates.empty()) {
    if (options.fallback_roster.empty()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "session '", session.source_id,
          "' has no labelled faces and no fallback roster was given"));
    }
    Rng rng(options.seed);
    for (size_t i = 0; i < m; ++i) {
      out.speakers.push_back(
          options.fallback_roster[rng.UniformInt(options.fallback_roster.size())]);
    }
    out.used_fallback = true;
    return out;
  }

  RewardInstance inst;
  inst.candidates = candidates;
  inst.alpha = alpha;
  if (p_sim.empty()) {
    inst.text_reward = Matrix(m, m, 0.0);
  } else {
    if (p_sim.rows() != m || p_sim.cols() != m) {
      return absl::InvalidArgumentError(absl::StrCat(
          "session '", session.source_id, "': similarity matrix is ",
          p_sim.rows(), "x", p_sim.cols(), ", expected ", m, "x", m));
    }
    inst.text_reward = BuildTextReward(p_sim);
  }
  ASSIGN_OR_RETURN(inst.vision_reward, BuildVisionReward(session, candidates));

  Assignment assignment;
  switch (options.solver) {
    case SolverMethod::kEnumeration: {
      ASSIGN_OR_RETURN(assignment, SolveExact(inst, options.budget));
      break;
    }
    case SolverMethod::kBranchAndBound: {
      ASSIGN_OR_RETURN(assignment, SolveBranchAndBound(inst));
      break;
    }
    case SolverMethod::kLocalSearch: {
      LocalSearchOptions local = options.local;
      local.seed = options.seed;
      ASSIGN_OR_RETURN(assignment, SolveLocalSearch(inst, local));
      break;
    }
  }
  for (size_t c : assignment.choice) out.speakers.push_back(candidates[c]);
  out.assignment = std::move(assignment);
  return out;
}

absl::StatusOr<std::vector<SpeakerPrediction>> IdentifyCorpus(
    const std::vector<Session>& sessions, const std::vector<Matrix>& p_sims,
    double alpha, const IdentifyOptions& options, int jobs) {
  if (!p_sims.empty() && p_sims.size() != sessions.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        p_sims.size(), " similarity matrices for ", sessions.size(),
        " sessions"));
  }
  std::vector<absl::StatusOr<SpeakerPrediction>> results(
      sessions.size(), absl::UnknownError("not run"));
  const Matrix none;
  ParallelFor(sessions.size(), jobs, [&](size_t i) {
    IdentifyOptions local = options;
    local.seed = MixSeed(options.seed, i);
    results[i] = IdentifySpeakers(sessions[i], p_sims.empty() ? none : p_sims[i],
                                  alpha, local);
  });
  std::vector<SpeakerPrediction> out;
  out.reserve(results.size());
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

absl::StatusOr<double> Accuracy(
    const std::vector<std::vector<CharacterId>>& predictions,
    const std::vector<Session>& sessions) {
  if (predictions.size() != sessions.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        predictions.size(), " predictions for ", sessions.size(), " sessions"));
  }
  size_t correct = 0;
  size_t total = 0;
  for (size_t s = 0; s < sessions.size(); ++s) {
    const auto& turns = sessions[s].turns;
    if (predictions[s].size() != turns.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "session ", s, ": ", predictions[s].size(), " predictions for ",
          turns.size(), " turns"));
    }
    for (size_t i = 0; i < turns.size(); ++i) {
      if (!turns[i].speaker) continue;
      ++total;
      if (predictions[s][i] == *turns[i].speaker) ++correct;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(correct) / static_cast<double>(total);
}

absl::StatusOr<double> Accuracy(const std::vector<SpeakerPrediction>& predictions,
                                const std::vector<Session>& sessions) {
  std::vector<std::vector<CharacterId>> names;
  names.reserve(predictions.size());
  for (const SpeakerPrediction& p : predictions) names.push_back(p.speakers);
  return Accuracy(names, sessions);
}

absl::StatusOr<std::vector<std::vector<CharacterId>>> RandomBaseline(
    const std::vector<Session>& sessions,
    const std::vector<CharacterId>& fallback_roster, uint64_t seed) {
  std::vector<std::vector<CharacterId>> out;
  out.reserve(sessions.size());
  for (size_t s = 0; s < sessions.size(); ++s) {
    std::vector<CharacterId> pool = CandidateSet(sessions[s]);
    if (pool.empty()) pool = fallback_roster;
    if (pool.empty()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "session ", s, " has no candidates and no fallback roster"));
    }
    Rng rng(MixSeed(seed, s));
    std::vector<CharacterId> row;
    for (size_t i = 0; i < sessions[s].turns.size(); ++i)
      row.push_back(pool[rng.UniformInt(pool.size())]);
    out.push_back(std::move(row));
  }
  return out;
}

double ExpectedRandomAccuracy(const std::vector<Session>& sessions) {
  double total = 0.0;
  size_t turns = 0;
  for (const Session& session : sessions) {
    const std::vector<CharacterId> pool = CandidateSet(session);
    for (const Turn& turn : session.turns) {
      if (!turn.speaker) continue;
      ++turns;
      if (pool.empty()) continue;
      if (std::find(pool.begin(), pool.end(), *turn.speaker) != pool.end())
        total += 1.0 / static_cast<double>(pool.size());
    }
  }
  return turns == 0 ? 0.0 : total / static_cast<double>(turns);
}

absl::StatusOr<std::vector<SweepPoint>> AlphaSweep(
    const std::vector<Session>& sessions, const std::vector<Matrix>& p_sims,
    const std::vector<double>& grid, const IdentifyOptions& options, int jobs) {
  std::vector<SweepPoint> out;
  for (double alpha : grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("alpha grid value ", alpha, " outside [0, 1]"));
    }
    ASSIGN_OR_RETURN(std::vector<SpeakerPrediction> predictions,
                     IdentifyCorpus(sessions, p_sims, alpha, options, jobs));
    ASSIGN_OR_RETURN(double accuracy, Accuracy(predictions, sessions));
    out.push_back({alpha, accuracy});
  }
  return out;
}

absl::StatusOr<double> TuneAlpha(const std::vector<Session>& sessions,
                                 const std::vector<Matrix>& p_sims,
                                 const std::vector<double>& grid,
                                 const IdentifyOptions& options,
                                 double holdout_fraction, uint64_t seed) {
  if (sessions.empty() || grid.empty()) {
    return absl::InvalidArgumentError("tuning needs sessions and a grid");
  }
  if (!(holdout_fraction > 0.0 && holdout_fraction <= 1.0)) {
    return absl::InvalidArgumentError("holdout fraction must be in (0, 1]");
  }
  const size_t n = std::max<size_t>(
      1, static_cast<size_t>(std::floor(holdout_fraction *
                                        static_cast<double>(sessions.size()))));
  Rng rng(seed);
  std::vector<size_t> picks = rng.SampleWithoutReplacement(sessions.size(), n);
  std::sort(picks.begin(), picks.end());
  std::vector<Session> held;
  std::vector<Matrix> held_sims;
  for (size_t p : picks) {
    held.push_back(sessions[p]);
    if (!p_sims.empty()) held_sims.push_back(p_sims[p]);
  }
  ASSIGN_OR_RETURN(std::vector<SweepPoint> sweep,
                   AlphaSweep(held, held_sims, grid, options));
  SweepPoint best = sweep.front();
  for (const SweepPoint& point : sweep)
    if (point.accuracy > best.accuracy) best = point;
  return best.alpha;
}

}  // namespace mmspeaker
