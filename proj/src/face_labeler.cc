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

#include "mmspeaker/face_labeler.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "mmspeaker/status_macros.h"
#include "mmspeaker/tracks.h"

namespace mmspeaker {
namespace {

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct Face {
  int frame;
  BoundingBox box;
  CharacterId label;
};

std::map<int, std::vector<Face>> FacesByFrame(std::span<const FaceTrack> tracks) {
  std::map<int, std::vector<Face>> out;
  for (const FaceTrack& track : tracks) {
    if (!track.label) continue;
    for (const FaceObservation& obs : track.observations)
      out[obs.frame_index].push_back({obs.frame_index, obs.box, *track.label});
  }
  return out;
}

}  // namespace

absl::Status PrototypeBank::Add(const CharacterId& who,
                                std::vector<double> embedding) {
  if (who.empty()) return absl::InvalidArgumentError("empty character name");
  if (embedding.empty()) return absl::InvalidArgumentError("empty prototype");
  if (dim_ == 0) dim_ = embedding.size();
  if (embedding.size() != dim_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prototype dimension ", embedding.size(), ", expected ", dim_));
  }
  const double n = Norm(embedding);
  if (!std::isfinite(n) || n == 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("prototype for '", who.name(), "' has zero norm"));
  }
  prototypes_[who].push_back(std::move(embedding));
  return absl::OkStatus();
}

absl::StatusOr<PrototypeBank> PrototypeBank::FromScoreTable(
    const ScoreTable& table) {
  RETURN_IF_ERROR(ValidateScoreTable(table));
  PrototypeBank bank;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    ASSIGN_OR_RETURN(CharacterId who, CharacterId::Parse(table.rows[r]));
    auto row = table.values.row(r);
    RETURN_IF_ERROR(bank.Add(who, std::vector<double>(row.begin(), row.end())));
  }
  return bank;
}

ScoreTable PrototypeBank::ToScoreTable() const {
  ScoreTable table;
  table.id = "prototypes";
  for (size_t c = 0; c < dim_; ++c) table.cols.push_back(absl::StrCat(c));
  std::vector<double> values;
  for (const auto& [who, list] : prototypes_) {
    for (const auto& v : list) {
      table.rows.push_back(who.name());
      values.insert(values.end(), v.begin(), v.end());
    }
  }
  table.values = Matrix(table.rows.size(), dim_, std::move(values));
  return table;
}

absl::StatusOr<double> Cosine(std::span<const double> u,
                              std::span<const double> v) {
  if (u.size() != v.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cosine of vectors with dimensions ", u.size(), " and ", v.size()));
  }
  const double nu = Norm(u);
  const double nv = Norm(v);
  if (nu == 0.0 || nv == 0.0) {
    return absl::InvalidArgumentError("cosine of a zero-norm vector");
  }
  double dot = 0.0;
  for (size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

absl::StatusOr<std::map<CharacterId, double>> ScoreTrack(
    const FaceTrack& track, const PrototypeBank& bank, int top_k) {
  if (top_k < 1) return absl::InvalidArgumentError("top_k must be >= 1");
  if (track.observations.empty()) {
    return absl::InvalidArgumentError("track has no observations");
  }
  for (size_t i = 0; i < track.observations.size(); ++i) {
    if (!track.observations[i].embedding) {
      return absl::FailedPreconditionError(
          absl::StrCat("observations[", i, "] has no embedding"));
    }
  }
  std::map<CharacterId, double> scores;
  for (const auto& [who, list] : bank.prototypes()) {
    std::vector<double> sims;
    sims.reserve(list.size() * track.observations.size());
    for (const FaceObservation& obs : track.observations) {
      for (const auto& proto : list) {
        ASSIGN_OR_RETURN(double c, Cosine(*obs.embedding, proto));
        sims.push_back(c);
      }
    }
    const size_t k = std::min(sims.size(), static_cast<size_t>(top_k));
    std::partial_sort(sims.begin(), sims.begin() + static_cast<ptrdiff_t>(k),
                      sims.end(), std::greater<>());
    double total = 0.0;
    for (size_t i = 0; i < k; ++i) total += sims[i];
    scores[who] = total / static_cast<double>(k);
  }
  return scores;
}

absl::StatusOr<std::optional<CharacterId>> LabelTrack(
    const FaceTrack& track, const PrototypeBank& bank,
    const LabelOptions& options) {
  ASSIGN_OR_RETURN(auto scores, ScoreTrack(track, bank, options.top_k));
  std::optional<CharacterId> best;
  double best_score = -std::numeric_limits<double>::infinity();
  // Map iteration is in name order, so strict '>' keeps the smallest name.
  for (const auto& [who, score] : scores) {
    if (score > best_score) {
      best_score = score;
      best = who;
    }
  }
  if (best && best_score > options.threshold) return best;
  return std::optional<CharacterId>();
}

absl::StatusOr<LabelValidationReport> ValidateLabels(
    std::span<const FaceTrack> automatic, std::span<const FaceTrack> reference,
    double iou_match) {
  if (!(iou_match > 0.0 && iou_match <= 1.0)) {
    return absl::InvalidArgumentError("iou_match must be in (0, 1]");
  }
  const auto auto_faces = FacesByFrame(automatic);
  const auto ref_faces = FacesByFrame(reference);

  LabelValidationReport report;
  for (const auto& [frame, faces] : auto_faces) {
    auto it = ref_faces.find(frame);
    if (it == ref_faces.end()) {
      report.unmatched_auto += faces.size();
      continue;
    }
    const std::vector<Face>& refs = it->second;
    std::vector<std::tuple<double, size_t, size_t>> pairs;
    for (size_t a = 0; a < faces.size(); ++a) {
      for (size_t r = 0; r < refs.size(); ++r) {
        const double v = Iou(faces[a].box, refs[r].box);
        if (v > iou_match) pairs.emplace_back(v, a, r);
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::make_pair(std::get<1>(x), std::get<2>(x)) <
             std::make_pair(std::get<1>(y), std::get<2>(y));
    });
    std::vector<bool> a_used(faces.size(), false), r_used(refs.size(), false);
    size_t matched_here = 0;
    for (const auto& [v, a, r] : pairs) {
      if (a_used[a] || r_used[r]) continue;
      a_used[a] = r_used[r] = true;
      ++matched_here;
      if (faces[a].label == refs[r].label) ++report.correct_pairs;
    }
    report.matched_pairs += matched_here;
    report.unmatched_auto += faces.size() - matched_here;
  }
  size_t total_ref = 0;
  for (const auto& [frame, refs] : ref_faces) total_ref += refs.size();
  report.unmatched_reference = total_ref - report.matched_pairs;
  if (report.matched_pairs > 0) {
    report.accuracy = static_cast<double>(report.correct_pairs) /
                      static_cast<double>(report.matched_pairs);
  }
  return report;
}

}  // namespace mmspeaker
