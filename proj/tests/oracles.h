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


// Independent reference implementations used as test oracles. They follow
// the defining formulas literally and share no code with the library.

#ifndef MMSPEAKER_TESTS_ORACLES_H_
#define MMSPEAKER_TESTS_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "mmspeaker/corpus.h"
#include "mmspeaker/matrix.h"
#include "mmspeaker/random.h"
#include "mmspeaker/speaker_solver.h"

namespace mmspeaker::testing {

// Objective straight from the definition.
inline double OracleObjective(const Matrix& a, const Matrix& b, double alpha,
                              const std::vector<size_t>& x) {
  double quad = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (i != j && x[i] == x[j]) quad += a(i, j);
  double lin = 0.0;
  for (size_t i = 0; i < x.size(); ++i) lin += b(x[i], i);
  return (1.0 - alpha) * quad + alpha * lin;
}

struct OracleOptimum {
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<size_t> first;  // lexicographically smallest maximizer
  size_t num_optimal = 0;
};

// Counts assignments as base-l numbers with turn 0 most significant, so the
// first maximizer met is the lexicographically smallest.
inline OracleOptimum OracleSolve(const Matrix& a, const Matrix& b, double alpha,
                                 double tie_tolerance = 0.0) {
  const size_t l = b.rows();
  const size_t m = b.cols();
  uint64_t total = 1;
  for (size_t i = 0; i < m; ++i) total *= l;
  OracleOptimum best;
  std::vector<size_t> x(m, 0);
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t rest = code;
    for (size_t i = m; i-- > 0;) {
      x[i] = rest % l;
      rest /= l;
    }
    const double f = OracleObjective(a, b, alpha, x);
    if (f > best.objective + tie_tolerance) {
      best.objective = f;
      best.first = x;
      best.num_optimal = 1;
    } else if (std::abs(f - best.objective) <= tie_tolerance) {
      ++best.num_optimal;
    }
  }
  return best;
}

inline RewardInstance RandomInstance(Rng& rng, size_t m, size_t l, double alpha) {
  RewardInstance inst;
  inst.alpha = alpha;
  inst.text_reward = Matrix(m, m, 0.0);
  inst.vision_reward = Matrix(l, m, 0.0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) inst.text_reward(i, j) = rng.Uniform(-0.5, 0.5);
  for (size_t c = 0; c < l; ++c)
    for (size_t j = 0; j < m; ++j) inst.vision_reward(c, j) = rng.UniformDouble();
  return inst;
}

// Similarity head, one scalar at a time.
inline double OracleGelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

inline Matrix OracleHeadForward(const Matrix& w1, const std::vector<double>& b1,
                                const std::vector<double>& w2, double b2,
                                const Matrix& h) {
  const size_t m = h.rows();
  const size_t d = h.cols();
  Matrix p(m, m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      std::vector<double> input;
      for (size_t k = 0; k < d; ++k) input.push_back(h(i, k));
      for (size_t k = 0; k < d; ++k) input.push_back(h(j, k));
      for (size_t k = 0; k < d; ++k) input.push_back(std::fabs(h(i, k) - h(j, k)));
      double z = b2;
      for (size_t u = 0; u < w1.rows(); ++u) {
        double pre = b1[u];
        for (size_t k = 0; k < input.size(); ++k) pre += w1(u, k) * input[k];
        z += w2[u] * OracleGelu(pre);
      }
      p(i, j) = 1.0 / (1.0 + std::exp(-z));
    }
  }
  return p;
}

// Window selection by checking every window against both rules.
inline std::vector<size_t> OracleWindowStarts(const std::vector<Turn>& turns,
                                              const Roster& roster, size_t m,
                                              double max_gap) {
  std::vector<size_t> starts;
  if (turns.size() < m) return starts;
  for (size_t s = 0; s + m <= turns.size(); ++s) {
    bool ok = true;
    for (size_t i = s; i < s + m && ok; ++i) {
      ok = turns[i].speaker.has_value() && roster.count(*turns[i].speaker) > 0;
    }
    for (size_t i = s; i + 1 < s + m && ok; ++i) {
      ok = turns[i + 1].start_time - turns[i].end_time < max_gap;
    }
    if (ok) starts.push_back(s);
  }
  return starts;
}

// Same-speaker partition of a turn sequence as a set of index groups,
// independent of naming.
template <typename Label>
std::set<std::set<size_t>> Partition(const std::vector<Label>& labels) {
  std::set<std::set<size_t>> groups;
  for (size_t i = 0; i < labels.size(); ++i) {
    std::set<size_t> g;
    for (size_t j = 0; j < labels.size(); ++j)
      if (labels[j] == labels[i]) g.insert(j);
    groups.insert(g);
  }
  return groups;
}

inline FaceObservation Obs(int frame, BoundingBox box,
                           std::optional<std::vector<double>> emb = {}) {
  FaceObservation o;
  o.frame_index = frame;
  o.box = box;
  o.embedding = std::move(emb);
  return o;
}

inline FaceTrack LabelledTrack(const std::string& name, double prob, int frame = 0) {
  FaceTrack t;
  t.label = CharacterId(name);
  t.speaking_prob = prob;
  t.observations.push_back(Obs(frame, {0, 0, 10, 10}));
  return t;
}

inline Turn MakeTurn(const std::string& speaker, double start, double end,
                     std::vector<FaceTrack> tracks = {}) {
  Turn t;
  t.utterance = "hello there";
  if (!speaker.empty()) t.speaker = CharacterId(speaker);
  t.start_time = start;
  t.end_time = end;
  t.tracks = std::move(tracks);
  return t;
}

}  // namespace mmspeaker::testing

#endif  // MMSPEAKER_TESTS_ORACLES_H_
