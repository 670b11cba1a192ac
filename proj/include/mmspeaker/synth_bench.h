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

// Synthetic conversations with planted ground truth.
//
// Each session draws a small cast from the roster and a speaker per turn.
// The speaker's face is visible with probability p_face_present, other cast
// members with probability p_bystander. With probability p_vision_correct
// the speaker (when visible) gets the highest speaking probability of the
// turn; otherwise a visible bystander does (one is added if none is
// visible). Similarity matrices are the same-speaker labels pulled toward
// 0.5 by sim_noise and perturbed by uniform jitter; utterance embeddings
// and face embeddings are isotropic Gaussian clouds around per-character
// random unit centroids.

#ifndef MMSPEAKER_SYNTH_BENCH_H_
#define MMSPEAKER_SYNTH_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"
#include "mmspeaker/face_labeler.h"
#include "mmspeaker/matrix.h"

namespace mmspeaker {

struct SynthConfig {
  size_t num_sessions = 200;
  int window_size = 5;
  size_t roster_size = 8;
  size_t min_cast = 2;
  size_t max_cast = 4;
  double p_face_present = 0.85;
  double p_vision_correct = 0.7;
  double p_bystander = 0.5;
  double sim_noise = 0.0;
  double sim_jitter = 0.1;
  size_t embedding_dim = 16;
  double embedding_spread = 0.3;
  // 0 disables face embeddings and prototypes.
  size_t face_dim = 8;
  double face_spread = 0.1;
  size_t prototypes_per_character = 20;
  double frames_per_second = 25.0;
  // Observations are kept every `frame_stride` frames.
  int frame_stride = 5;

  absl::Status Validate() const;
};

struct SynthSessionTruth {
  std::vector<CharacterId> cast;
  std::vector<bool> speaker_visible;  // per turn
  std::vector<bool> vision_correct;   // per turn, as drawn
};

struct SynthOracle {
  std::vector<SynthSessionTruth> sessions;
  size_t labelled_turns = 0;
  size_t absent_from_current = 0;
  size_t absent_from_session = 0;
};

struct SynthCorpus {
  SynthConfig config;
  uint64_t seed = 0;
  std::vector<CharacterId> roster;
  std::vector<Session> sessions;
  std::vector<Matrix> similarities;  // m x m per session
  std::vector<Matrix> embeddings;    // m x embedding_dim per session
  PrototypeBank prototypes;
  SynthOracle oracle;
};

// Fully determined by (config, seed). Sessions are generated from
// independent per-session streams.
absl::StatusOr<SynthCorpus> GenerateCorpus(const SynthConfig& config,
                                           uint64_t seed);

// Counterpart of the JSON config file accepted by the CLI: every field is
// optional and named as in SynthConfig.
absl::StatusOr<SynthConfig> ParseSynthConfig(const std::string& json_text);
std::string SerializeSynthConfig(const SynthConfig& config);

// Writes sessions.jsonl, similarity.jsonl, embeddings.jsonl,
// m1_scores.jsonl, prototypes.jsonl, roster.txt and oracle.json into `dir`
// (which must exist).
absl::Status SaveSynthCorpus(const SynthCorpus& corpus, const std::string& dir);

}  // namespace mmspeaker

#endif  // MMSPEAKER_SYNTH_BENCH_H_
