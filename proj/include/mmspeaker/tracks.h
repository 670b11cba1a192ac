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

// Face tracks from per-frame detections.
//
// The linker is greedy and frame-synchronous: at each frame, candidate
// (detection, open track) pairs with IoU at or above the link threshold are
// taken in order of decreasing IoU, then increasing track creation index,
// then increasing detection index. A track is open if its last observation
// is at most `max_gap` frames back. Unmatched detections start new tracks.

#ifndef MMSPEAKER_TRACKS_H_
#define MMSPEAKER_TRACKS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

struct Detection {
  BoundingBox box;
  std::optional<std::vector<double>> embedding;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectionFrame {
  int frame_index = 0;
  std::vector<Detection> detections;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

using DetectionSet = std::vector<DetectionFrame>;

struct TrackLinkOptions {
  double iou_link_threshold = 0.5;
  int max_gap = 1;
  int min_len = 2;
};

// Intersection over union; 0 for disjoint boxes.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Frames are processed in increasing frame_index order regardless of input
// order. Fails on invalid thresholds or duplicate frame indices.
absl::StatusOr<std::vector<FaceTrack>> MergeTracks(
    const DetectionSet& detections, double iou_link_threshold, int max_gap);

// Keeps tracks with at least `min_len` observations, preserving order.
std::vector<FaceTrack> CleanTracks(std::vector<FaceTrack> tracks, int min_len);

// Frame in which the most tracks of the turn are active; earliest on ties.
// Considers every frame covered by an observation. Without any observation
// the default frame is returned, or an error if none is configured.
absl::StatusOr<int> SelectKeyFrame(const Turn& turn,
                                   std::optional<int> default_frame = {});

// Position of the largest count, earliest on ties; `default_frame` when all
// counts are zero or the span is empty.
absl::StatusOr<int> ArgmaxFaceCount(std::span<const int> counts,
                                    std::optional<int> default_frame = {});

// Detection file: one JSON object per line,
//   {"frame_index": int, "detections": [{"box": [x0,y0,x1,y1],
//                                        "embedding": [...]?}]}
absl::StatusOr<DetectionSet> LoadDetections(const std::string& path);
absl::Status SaveDetections(const DetectionSet& detections,
                            const std::string& path);

}  // namespace mmspeaker

#endif  // MMSPEAKER_TRACKS_H_
