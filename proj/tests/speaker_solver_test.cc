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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "mmspeaker/random.h"
#include "mmspeaker/session_builder.h"
#include "mmspeaker/speaker_solver.h"
#include "oracles.h"

namespace mmspeaker {
namespace {

using testing::LabelledTrack;
using testing::MakeTurn;
using testing::OracleObjective;
using testing::OracleSolve;
using testing::RandomInstance;

Matrix FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.front().size(), 0.0);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

RewardInstance WorkedExample() {
  RewardInstance inst;
  inst.text_reward = FromRows({{0, 1, -1}, {1, 0, -1}, {-1, -1, 0}});
  inst.vision_reward = FromRows({{0.6, 0.2, 0.9}, {0.4, 0.8, 0.1}});
  inst.alpha = 0.5;
  return inst;
}

TEST(TextRewardTest, Examples) {
  EXPECT_EQ(BuildTextReward(Matrix(3, 3, 0.5)), Matrix(3, 3, 0.0));
  const Matrix a = BuildTextReward(FromRows({{0.9, 0.1}, {0.1, 0.9}}));
  EXPECT_NEAR(a(0, 0), 0.4, 1e-15);
  EXPECT_NEAR(a(0, 1), -0.4, 1e-15);
  EXPECT_NEAR(a(1, 0), -0.4, 1e-15);
  EXPECT_NEAR(a(1, 1), 0.4, 1e-15);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix p(4, 4, 0.0);
    for (double& v : p.data()) v = rng.UniformDouble();
    EXPECT_NEAR(BuildTextReward(p).Mean(), 0.0, 1e-15);
  }
}

TEST(VisionRewardTest, Examples) {
  Session s;
  s.source_id = "x";
  s.turns.push_back(MakeTurn("ross", 0, 1, {LabelledTrack("ross", 0.9)}));
  s.turns.push_back(MakeTurn("joey", 1, 2));
  s.turns.push_back(
      MakeTurn("joey", 2, 3, {LabelledTrack("joey", 0.3), LabelledTrack("joey", 0.7)}));
  const std::vector<CharacterId> c = {CharacterId("ross"), CharacterId("joey")};
  auto b = BuildVisionReward(s, c);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(*b, FromRows({{0.9, 0.0, 0.0}, {0.0, 0.0, 0.7}}));

  EXPECT_FALSE(BuildVisionReward(s, {CharacterId("ross")}).ok())
      << "joey's track is outside the candidates";
  s.turns[0].tracks[0].speaking_prob.reset();
  EXPECT_FALSE(BuildVisionReward(s, c).ok());
}

TEST(ObjectiveTest, WorkedExample) {
  const RewardInstance inst = WorkedExample();
  EXPECT_NEAR(Objective(inst, {1, 1, 0}), 2.05, 1e-12);
  int better = 0;
  for (size_t a = 0; a < 2; ++a)
    for (size_t b = 0; b < 2; ++b)
      for (size_t c = 0; c < 2; ++c)
        if (Objective(inst, {a, b, c}) > 2.05 + 1e-12) ++better;
  EXPECT_EQ(better, 0);
}

TEST(ObjectiveTest, ReductionsAndOracleAgreement) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t m = 1 + rng.UniformInt(6);
    const size_t l = 1 + rng.UniformInt(5);
    RewardInstance inst = RandomInstance(rng, m, l, rng.UniformDouble());
    std::vector<size_t> x(m);
    for (size_t& v : x) v = rng.UniformInt(l);
    EXPECT_NEAR(Objective(inst, x),
                OracleObjective(inst.text_reward, inst.vision_reward, inst.alpha, x), 1e-12);
    inst.alpha = 1.0;
    double lin = 0.0;
    for (size_t i = 0; i < m; ++i) lin += inst.vision_reward(x[i], i);
    EXPECT_NEAR(Objective(inst, x), lin, 1e-12);
  }
  RewardInstance inst = RandomInstance(rng, 3, 4, 0.0);
  EXPECT_EQ(Objective(inst, {0, 1, 3}), 0.0);
}

TEST(ObjectiveTest, DiagonalOfTextRewardIsIgnored) {
  Rng rng(3);
  RewardInstance inst = RandomInstance(rng, 4, 3, 0.4);
  RewardInstance shifted = inst;
  for (size_t i = 0; i < 4; ++i) shifted.text_reward(i, i) += 5.0;
  for (size_t x = 0; x < 81; ++x) {
    std::vector<size_t> c = {x % 3, x / 3 % 3, x / 9 % 3, x / 27 % 3};
    EXPECT_EQ(Objective(inst, c), Objective(shifted, c));
  }
}

TEST(InstanceTest, Validation) {
  RewardInstance inst = WorkedExample();
  EXPECT_TRUE(inst.Validate().ok());
  inst.alpha = 1.5;
  EXPECT_FALSE(inst.Validate().ok());
  inst = WorkedExample();
  inst.text_reward = Matrix(2, 2, 0.0);
  EXPECT_FALSE(inst.Validate().ok());
  inst = WorkedExample();
  inst.vision_reward(0, 0) = NAN;
  EXPECT_FALSE(inst.Validate().ok());
  inst = WorkedExample();
  inst.candidates = {CharacterId("a")};
  EXPECT_FALSE(inst.Validate().ok());
}

TEST(SolveExactTest, Examples) {
  auto a = SolveExact(WorkedExample());
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->choice, (std::vector<size_t>{1, 1, 0}));
  EXPECT_NEAR(a->objective, 2.05, 1e-12);
  EXPECT_EQ(a->method, SolverMethod::kEnumeration);

  RewardInstance one = WorkedExample();
  one.vision_reward = FromRows({{0.6, 0.2, 0.9}});
  EXPECT_EQ(SolveExact(one)->choice, (std::vector<size_t>{0, 0, 0}));

  RewardInstance vision = WorkedExample();
  vision.alpha = 1.0;
  vision.vision_reward = FromRows({{0.6, 0.5, 0.9}, {0.4, 0.5, 0.1}});
  EXPECT_EQ(SolveExact(vision)->choice, (std::vector<size_t>{0, 0, 0}))
      << "tie in column 1 goes to the lowest index";
}

TEST(SolveExactTest, BudgetExceeded) {
  Rng rng(4);
  RewardInstance inst = RandomInstance(rng, 8, 6, 0.5);
  auto a = SolveExact(inst, 1000);
  ASSERT_FALSE(a.ok());
  EXPECT_EQ(a.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_TRUE(SolveExact(RandomInstance(rng, 3, 10, 0.5), 1000).ok());
}

TEST(SolveExactTest, MatchesEnumerationOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t m = 1 + rng.UniformInt(6);
    const size_t l = 1 + rng.UniformInt(4);
    const RewardInstance inst = RandomInstance(rng, m, l, rng.UniformDouble());
    const auto want = OracleSolve(inst.text_reward, inst.vision_reward, inst.alpha);
    auto got = SolveExact(inst);
    ASSERT_TRUE(got.ok());
    EXPECT_NEAR(got->objective, want.objective, 1e-9);
    EXPECT_EQ(got->choice, want.first);
  }
}

TEST(SolveExactTest, LexicographicTieBreak) {
  // Every assignment of a zero instance ties.
  RewardInstance inst;
  inst.text_reward = Matrix(3, 3, 0.0);
  inst.vision_reward = Matrix(3, 3, 0.0);
  inst.alpha = 0.5;
  EXPECT_EQ(SolveExact(inst)->choice, (std::vector<size_t>{0, 0, 0}));
  EXPECT_EQ(SolveBranchAndBound(inst)->choice, (std::vector<size_t>{0, 0, 0}));
}

TEST(SolveBranchAndBoundTest, AgreesWithExact) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t m = 1 + rng.UniformInt(8);
    const size_t l = 1 + rng.UniformInt(m <= 6 ? 6 : 4);
    const double alphas[] = {0.0, 0.2, 0.5, 0.7, 0.8, 1.0};
    const RewardInstance inst = RandomInstance(rng, m, l, alphas[rng.UniformInt(6)]);
    auto exact = SolveExact(inst);
    auto bnb = SolveBranchAndBound(inst);
    ASSERT_TRUE(exact.ok() && bnb.ok());
    EXPECT_EQ(bnb->objective, exact->objective);
    EXPECT_EQ(bnb->choice, exact->choice);
  }
}

TEST(SolveBranchAndBoundTest, SingleTurnAndSeparableCases) {
  RewardInstance inst;
  inst.text_reward = Matrix(1, 1, 0.3);
  inst.vision_reward = FromRows({{0.2}, {0.7}, {0.1}});
  inst.alpha = 0.5;
  EXPECT_EQ(SolveBranchAndBound(inst)->choice, (std::vector<size_t>{1}));

  Rng rng(7);
  for (double alpha : {0.1, 0.5, 0.9}) {
    RewardInstance sep = RandomInstance(rng, 6, 4, alpha);
    sep.text_reward = Matrix(6, 6, 0.0);
    sep.alpha = alpha;
    RewardInstance vision_only = sep;
    vision_only.alpha = 1.0;
    EXPECT_EQ(SolveBranchAndBound(sep)->choice, GreedyVisionChoice(vision_only));
  }
}

TEST(LocalSearchTest, WorkedExampleReachesOptimum) {
  auto a = SolveLocalSearch(WorkedExample());
  ASSERT_TRUE(a.ok());
  // Greedy start (0, 1, 0) scores 0.15; moving turn 0 to candidate 1 reaches 2.05.
  EXPECT_EQ(GreedyVisionChoice(WorkedExample()), (std::vector<size_t>{0, 1, 0}));
  EXPECT_NEAR(Objective(WorkedExample(), {0, 1, 0}), 0.15, 1e-12);
  EXPECT_NEAR(a->objective, 2.05, 1e-12);
  EXPECT_EQ(a->choice, (std::vector<size_t>{1, 1, 0}));
}

TEST(LocalSearchTest, GreedyOptimalWhenTextRewardIsZero) {
  Rng rng(8);
  RewardInstance inst = RandomInstance(rng, 5, 3, 0.6);
  inst.text_reward = Matrix(5, 5, 0.0);
  auto a = SolveLocalSearch(inst);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->choice, GreedyVisionChoice(inst));
  EXPECT_EQ(a->work, 0) << "no improving moves";
}

TEST(LocalSearchTest, BetweenGreedyAndExact) {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t m = 1 + rng.UniformInt(7);
    const size_t l = 1 + rng.UniformInt(5);
    const RewardInstance inst = RandomInstance(rng, m, l, rng.UniformDouble());
    LocalSearchOptions options;
    options.seed = rng.NextU64();
    options.restarts = static_cast<int>(rng.UniformInt(3));
    auto local = SolveLocalSearch(inst, options);
    auto exact = SolveExact(inst);
    ASSERT_TRUE(local.ok() && exact.ok());
    EXPECT_GE(local->objective, Objective(inst, GreedyVisionChoice(inst)) - 1e-12);
    EXPECT_LE(local->objective, exact->objective + 1e-12);
    EXPECT_NEAR(local->objective, Objective(inst, local->choice), 1e-12);
  }
  LocalSearchOptions bad;
  bad.max_iterations = 0;
  EXPECT_FALSE(SolveLocalSearch(WorkedExample(), bad).ok());
}

TEST(InvarianceTest, ConstantShiftOfVisionRewardKeepsArgmax) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t m = 2 + rng.UniformInt(4);
    RewardInstance inst = RandomInstance(rng, m, 3, rng.UniformDouble());
    RewardInstance shifted = inst;
    const double c = rng.Uniform(0.0, 3.0);
    for (double& v : shifted.vision_reward.data()) v += c;
    auto a = SolveExact(inst);
    auto b = SolveExact(shifted);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(a->choice, b->choice);
    EXPECT_NEAR(b->objective - a->objective, inst.alpha * c * static_cast<double>(m), 1e-9);
  }
}

TEST(InvarianceTest, CandidatePermutation) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t m = 1 + rng.UniformInt(5);
    const size_t l = 1 + rng.UniformInt(4);
    RewardInstance inst = RandomInstance(rng, m, l, rng.UniformDouble());
    std::vector<size_t> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    RewardInstance p = inst;
    for (size_t c = 0; c < l; ++c)
      for (size_t j = 0; j < m; ++j) p.vision_reward(c, j) = inst.vision_reward(perm[c], j);
    // Candidate perm[c] of inst is candidate c of p.
    std::vector<size_t> inverse(l);
    for (size_t c = 0; c < l; ++c) inverse[perm[c]] = c;
    std::vector<size_t> x(m);
    for (size_t& v : x) v = rng.UniformInt(l);
    std::vector<size_t> y(m);
    for (size_t i = 0; i < m; ++i) y[i] = inverse[x[i]];
    EXPECT_NEAR(Objective(inst, x), Objective(p, y), 1e-12);
    EXPECT_NEAR(SolveExact(inst)->objective, SolveExact(p)->objective, 1e-12);
  }
}

// All-positive p_sim with weak vision: without mean subtraction every pair
// pays to share a speaker.
RewardInstance MeanSubtractionInstance(bool subtract) {
  Matrix p_sim(4, 4, 0.0);
  const size_t group[] = {0, 0, 1, 1};
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) p_sim(i, j) = group[i] == group[j] ? 0.9 : 0.3;
  RewardInstance inst;
  inst.text_reward = subtract ? BuildTextReward(p_sim) : p_sim;
  inst.vision_reward = FromRows({{0.9, 0.8, 0.1, 0.2}, {0.1, 0.2, 0.9, 0.8}});
  inst.alpha = 0.1;
  return inst;
}

TEST(MeanSubtractionTest, RawSimilarityCollapsesToOneSpeaker) {
  auto raw = SolveExact(MeanSubtractionInstance(false));
  ASSERT_TRUE(raw.ok());
  EXPECT_TRUE(std::all_of(raw->choice.begin(), raw->choice.end(),
                          [&](size_t c) { return c == raw->choice[0]; }));
  auto centred = SolveExact(MeanSubtractionInstance(true));
  ASSERT_TRUE(centred.ok());
  EXPECT_EQ(centred->choice, (std::vector<size_t>{0, 0, 1, 1}));
}

Session ThreeTurnSession() {
  Session s;
  s.source_id = "s";
  s.turns.push_back(MakeTurn("ross", 0, 1, {LabelledTrack("ross", 0.9), LabelledTrack("joey", 0.2)}));
  s.turns.push_back(MakeTurn("joey", 1, 2, {LabelledTrack("joey", 0.8)}));
  s.turns.push_back(MakeTurn("ross", 2, 3, {LabelledTrack("ross", 0.7), LabelledTrack("joey", 0.6)}));
  return s;
}

TEST(IdentifySpeakersTest, VisionOnlyCorrectWhenSpeakerFaceWins) {
  IdentifyOptions options;
  auto p = IdentifySpeakers(ThreeTurnSession(), Matrix(), 1.0, options);
  ASSERT_TRUE(p.ok());
  EXPECT_FALSE(p->used_fallback);
  EXPECT_EQ(p->speakers, (std::vector<CharacterId>{CharacterId("ross"), CharacterId("joey"),
                                                   CharacterId("ross")}));
  EXPECT_EQ(*Accuracy({p->speakers}, {ThreeTurnSession()}), 1.0);
}

TEST(IdentifySpeakersTest, AllSolversAgree) {
  Rng rng(12);
  Matrix p_sim(3, 3, 0.0);
  for (double& v : p_sim.data()) v = rng.UniformDouble();
  IdentifyOptions options;
  std::vector<std::vector<CharacterId>> results;
  for (SolverMethod m : {SolverMethod::kEnumeration, SolverMethod::kBranchAndBound,
                         SolverMethod::kLocalSearch}) {
    options.solver = m;
    options.local.restarts = 3;
    auto p = IdentifySpeakers(ThreeTurnSession(), p_sim, 0.5, options);
    ASSERT_TRUE(p.ok());
    EXPECT_EQ(p->assignment->method, m);
    results.push_back(p->speakers);
  }
  EXPECT_EQ(results[0], results[1]);
  EXPECT_EQ(results[0], results[2]);
}

TEST(IdentifySpeakersTest, FallbackWhenNoFaces) {
  Session s;
  s.source_id = "empty";
  s.turns = {MakeTurn("ross", 0, 1), MakeTurn("joey", 1, 2)};
  IdentifyOptions options;
  EXPECT_EQ(IdentifySpeakers(s, Matrix(), 0.8, options).status().code(),
            absl::StatusCode::kFailedPrecondition);
  options.fallback_roster = {CharacterId("ross"), CharacterId("joey"), CharacterId("monica")};
  options.seed = 17;
  auto a = IdentifySpeakers(s, Matrix(), 0.8, options);
  auto b = IdentifySpeakers(s, Matrix(), 0.8, options);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_TRUE(a->used_fallback);
  EXPECT_FALSE(a->assignment.has_value());
  EXPECT_EQ(a->speakers, b->speakers);
  EXPECT_EQ(a->speakers.size(), 2u);
}

TEST(IdentifySpeakersTest, BadInputs) {
  IdentifyOptions options;
  EXPECT_FALSE(IdentifySpeakers(ThreeTurnSession(), Matrix(), 1.5, options).ok());
  EXPECT_FALSE(IdentifySpeakers(ThreeTurnSession(), Matrix(2, 2, 0.5), 0.5, options).ok());
}

TEST(IdentifySpeakersTest, GroundTruthSimilarityRecoversPartition) {
  Rng rng(13);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 50; ++trial) {
    Session s;
    s.source_id = "gt";
    std::vector<size_t> who(5);
    for (size_t i = 0; i < 5; ++i) {
      who[i] = rng.UniformInt(3);
      s.turns.push_back(MakeTurn(names[who[i]], i, i + 0.5));
    }
    // Every cast member appears once so the candidate set covers them all.
    for (size_t c = 0; c < 3; ++c)
      s.turns[c].tracks.push_back(LabelledTrack(names[c], rng.UniformDouble()));
    Matrix p_sim(5, 5, 0.0);
    for (size_t i = 0; i < 5; ++i)
      for (size_t j = 0; j < 5; ++j) p_sim(i, j) = who[i] == who[j] ? 1.0 : 0.0;
    auto p = IdentifySpeakers(s, p_sim, 0.0, IdentifyOptions{});
    ASSERT_TRUE(p.ok());
    EXPECT_EQ(testing::Partition(p->speakers), testing::Partition(who));
  }
}

TEST(AccuracyTest, Examples) {
  Session s;
  s.source_id = "x";
  for (int i = 0; i < 5; ++i) s.turns.push_back(MakeTurn(i % 2 ? "b" : "a", i, i + 1));
  const std::vector<CharacterId> gold = {CharacterId("a"), CharacterId("b"), CharacterId("a"),
                                         CharacterId("b"), CharacterId("a")};
  EXPECT_EQ(*Accuracy({gold}, {s}), 1.0);
  std::vector<CharacterId> wrong(5, CharacterId("z"));
  EXPECT_EQ(*Accuracy({wrong}, {s}), 0.0);
  std::vector<CharacterId> three = gold;
  three[1] = three[4] = CharacterId("z");
  EXPECT_DOUBLE_EQ(*Accuracy({three}, {s}), 0.6);
  EXPECT_FALSE(Accuracy({{CharacterId("a")}}, {s}).ok());
  EXPECT_FALSE(Accuracy({gold, gold}, {s}).ok());
}

TEST(BaselineTest, ExpectedRandomAccuracy) {
  Session s;
  s.source_id = "x";
  const std::vector<std::string> cast = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i)
    s.turns.push_back(MakeTurn(cast[i], i, i + 1, {LabelledTrack(cast[i], 0.5)}));
  EXPECT_DOUBLE_EQ(ExpectedRandomAccuracy({s}), 0.25);

  std::vector<Session> many(2000, s);
  auto preds = RandomBaseline(many, {}, 77);
  ASSERT_TRUE(preds.ok());
  const double acc = *Accuracy(*preds, many);
  // 8000 Bernoulli(0.25) draws.
  EXPECT_NEAR(acc, 0.25, 3 * std::sqrt(0.25 * 0.75 / 8000));
}

TEST(SweepTest, EndpointsReduceToPureModels) {
  Rng rng(14);
  std::vector<Session> sessions;
  std::vector<Matrix> sims;
  for (int k = 0; k < 20; ++k) {
    Session s = ThreeTurnSession();
    for (Turn& t : s.turns)
      for (FaceTrack& f : t.tracks) f.speaking_prob = rng.UniformDouble();
    sessions.push_back(s);
    Matrix p(3, 3, 0.0);
    for (double& v : p.data()) v = rng.UniformDouble();
    sims.push_back(p);
  }
  IdentifyOptions options;
  auto sweep = AlphaSweep(sessions, sims, {0.0, 1.0}, options);
  ASSERT_TRUE(sweep.ok());
  ASSERT_EQ(sweep->size(), 2u);
  auto text_only = IdentifyCorpus(sessions, sims, 0.0, options);
  auto vision_only = IdentifyCorpus(sessions, std::vector<Matrix>(20), 1.0, options);
  EXPECT_EQ((*sweep)[0].accuracy, *Accuracy(*text_only, sessions));
  EXPECT_EQ((*sweep)[1].accuracy, *Accuracy(*vision_only, sessions));

  auto single = AlphaSweep(sessions, sims, {0.8}, options);
  ASSERT_EQ(single->size(), 1u);
  EXPECT_EQ((*single)[0].alpha, 0.8);
  EXPECT_FALSE(AlphaSweep(sessions, sims, {1.2}, options).ok());
}

TEST(CorpusTest, JobCountDoesNotChangeResults) {
  Rng rng(15);
  std::vector<Session> sessions(40, ThreeTurnSession());
  std::vector<Matrix> sims;
  for (size_t k = 0; k < sessions.size(); ++k) {
    Matrix p(3, 3, 0.0);
    for (double& v : p.data()) v = rng.UniformDouble();
    sims.push_back(p);
  }
  sessions[5].turns[0].tracks.clear();
  sessions[5].turns[1].tracks.clear();
  sessions[5].turns[2].tracks.clear();
  IdentifyOptions options;
  options.fallback_roster = {CharacterId("ross"), CharacterId("joey")};
  auto one = IdentifyCorpus(sessions, sims, 0.5, options, 1);
  auto many = IdentifyCorpus(sessions, sims, 0.5, options, 8);
  ASSERT_TRUE(one.ok() && many.ok());
  ASSERT_EQ(one->size(), many->size());
  for (size_t k = 0; k < one->size(); ++k) EXPECT_EQ((*one)[k].speakers, (*many)[k].speakers);
}

TEST(TuneAlphaTest, PicksBestHeldOutAlpha) {
  std::vector<Session> sessions(20, ThreeTurnSession());
  IdentifyOptions options;
  auto alpha = TuneAlpha(sessions, {}, {0.0, 1.0}, options, 0.1, 3);
  ASSERT_TRUE(alpha.ok()) << alpha.status();
  EXPECT_EQ(*alpha, 1.0);
  EXPECT_FALSE(TuneAlpha(sessions, {}, {}, options).ok());
  EXPECT_FALSE(TuneAlpha(sessions, {}, {0.5}, options, 0.0).ok());
}

TEST(SolverMethodTest, Names) {
  for (SolverMethod m : {SolverMethod::kEnumeration, SolverMethod::kBranchAndBound,
                         SolverMethod::kLocalSearch}) {
    EXPECT_EQ(*ParseSolverMethod(SolverMethodName(m)), m);
  }
  EXPECT_FALSE(ParseSolverMethod("gurobi").ok());
}

}  // namespace
}  // namespace mmspeaker
