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

#include "mmspeaker/tracks.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "mmspeaker/corpus_io.h"
#include "mmspeaker/json_fields.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.Area() + b.Area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

absl::StatusOr<std::vector<FaceTrack>> MergeTracks(
    const DetectionSet& detections, double iou_link_threshold, int max_gap) {
  if (!(iou_link_threshold > 0.0 && iou_link_threshold <= 1.0)) {
    return absl::InvalidArgumentError("iou_link_threshold must be in (0, 1]");
  }
  if (max_gap < 1) return absl::InvalidArgumentError("max_gap must be >= 1");

  std::vector<const DetectionFrame*> frames;
  frames.reserve(detections.size());
  for (const DetectionFrame& frame : detections) frames.push_back(&frame);
  std::stable_sort(frames.begin(), frames.end(),
                   [](const DetectionFrame* a, const DetectionFrame* b) {
                     return a->frame_index < b->frame_index;
                   });

  std::vector<FaceTrack> tracks;
  for (size_t f = 0; f < frames.size(); ++f) {
    const DetectionFrame& frame = *frames[f];
    if (frame.frame_index < 0) {
      return absl::InvalidArgumentError("negative frame_index in detections");
    }
    if (f > 0 && frames[f - 1]->frame_index == frame.frame_index) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate frame_index ", frame.frame_index));
    }
    for (const Detection& d : frame.detections) {
      if (!d.box.IsValid()) {
        return absl::InvalidArgumentError(
            absl::StrCat("invalid box in frame ", frame.frame_index));
      }
    }

    // (iou, track, detection) candidates.
    std::vector<std::tuple<double, size_t, size_t>> pairs;
    for (size_t t = 0; t < tracks.size(); ++t) {
      const FaceObservation& last = tracks[t].observations.back();
      if (frame.frame_index - last.frame_index > max_gap) continue;
      for (size_t d = 0; d < frame.detections.size(); ++d) {
        const double v = Iou(last.box, frame.detections[d].box);
        if (v >= iou_link_threshold) pairs.emplace_back(v, t, d);
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });

    std::vector<bool> track_taken(tracks.size(), false);
    std::vector<bool> detection_taken(frame.detections.size(), false);
    for (const auto& [v, t, d] : pairs) {
      if (track_taken[t] || detection_taken[d]) continue;
      track_taken[t] = true;
      detection_taken[d] = true;
      tracks[t].observations.push_back({frame.frame_index,
                                        frame.detections[d].box,
                                        frame.detections[d].embedding});
    }
    for (size_t d = 0; d < frame.detections.size(); ++d) {
      if (detection_taken[d]) continue;
      FaceTrack track;
      track.observations.push_back({frame.frame_index,
                                    frame.detections[d].box,
                                    frame.detections[d].embedding});
      tracks.push_back(std::move(track));
    }
  }
  return tracks;
}

std::vector<FaceTrack> CleanTracks(std::vector<FaceTrack> tracks, int min_len) {
  std::erase_if(tracks, [min_len](const FaceTrack& t) {
    return static_cast<int>(t.observations.size()) < min_len;
  });
  return tracks;
}

absl::StatusOr<int> ArgmaxFaceCount(std::span<const int> counts,
                                    std::optional<int> default_frame) {
  int best = -1;
  int best_count = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > best_count) {
      best_count = counts[i];
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) return best;
  if (default_frame) return *default_frame;
  return absl::FailedPreconditionError("no frame with detected faces");
}

absl::StatusOr<int> SelectKeyFrame(const Turn& turn,
                                   std::optional<int> default_frame) {
  std::map<int, int> counts;
  for (const FaceTrack& track : turn.tracks)
    for (const FaceObservation& obs : track.observations)
      counts.emplace(obs.frame_index, 0);
  for (auto& [frame, count] : counts)
    for (const FaceTrack& track : turn.tracks)
      if (track.ActiveAt(frame)) ++count;

  int best = -1;
  int best_count = 0;
  for (const auto& [frame, count] : counts) {
    if (count > best_count) {
      best_count = count;
      best = frame;
    }
  }
  if (best >= 0) return best;
  if (default_frame) return *default_frame;
  return absl::FailedPreconditionError("turn has no frames with faces");
}

absl::StatusOr<DetectionSet> LoadDetections(const std::string& path) {
  ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  DetectionSet set;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (absl::StripAsciiWhitespace(lines[i]).empty()) continue;
    auto fail = [&](const absl::Status& s) {
      return absl::Status(s.code(),
                          absl::StrCat("line ", i + 1, ": ", s.message()));
    };
    absl::StatusOr<Json> j = ParseJsonLine(lines[i]);
    if (!j.ok()) return fail(j.status());
    DetectionFrame frame;
    absl::StatusOr<int> index = RequiredField<int>(*j, "frame_index");
    if (!index.ok()) return fail(index.status());
    frame.frame_index = *index;
    auto it = j->find("detections");
    if (it == j->end() || !it->is_array()) {
      return fail(absl::DataLossError("field 'detections': expected an array"));
    }
    for (size_t d = 0; d < it->size(); ++d) {
      const Json& dj = (*it)[d];
      const std::string prefix = absl::StrCat("detections[", d, "].");
      absl::StatusOr<std::vector<double>> box =
          RequiredField<std::vector<double>>(dj, "box", prefix);
      if (!box.ok()) return fail(box.status());
      if (box->size() != 4) {
        return fail(absl::DataLossError(
            absl::StrCat("field '", prefix, "box': expected 4 numbers")));
      }
      absl::StatusOr<std::optional<std::vector<double>>> embedding =
          OptionalField<std::vector<double>>(dj, "embedding", prefix);
      if (!embedding.ok()) return fail(embedding.status());
      Detection det{{(*box)[0], (*box)[1], (*box)[2], (*box)[3]}, *embedding};
      if (!det.box.IsValid()) {
        return fail(absl::DataLossError(
            absl::StrCat("field '", prefix, "box': invalid box")));
      }
      frame.detections.push_back(std::move(det));
    }
    set.push_back(std::move(frame));
  }
  return set;
}

absl::Status SaveDetections(const DetectionSet& detections,
                            const std::string& path) {
  std::string text;
  for (const DetectionFrame& frame : detections) {
    Json j = Json::object();
    j["frame_index"] = frame.frame_index;
    Json list = Json::array();
    for (const Detection& d : frame.detections) {
      Json dj = Json::object();
      dj["box"] = Json::array({d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max});
      if (d.embedding) dj["embedding"] = *d.embedding;
      list.push_back(std::move(dj));
    }
    j["detections"] = std::move(list);
    absl::StrAppend(&text, j.dump(), "\n");
  }
  return WriteText(path, text);
}

}  // namespace mmspeaker
