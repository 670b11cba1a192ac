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


#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "mmspeaker/random.h"
#include "mmspeaker/tracks.h"
#include "oracles.h"

namespace mmspeaker {
namespace {

using testing::Obs;

DetectionFrame Frame(int index, std::vector<BoundingBox> boxes) {
  DetectionFrame f;
  f.frame_index = index;
  for (const BoundingBox& b : boxes) f.detections.push_back({b, std::nullopt});
  return f;
}

BoundingBox RandomBox(Rng& rng) {
  const double x = rng.Uniform(0, 50);
  const double y = rng.Uniform(0, 50);
  return {x, y, x + rng.Uniform(0.5, 30), y + rng.Uniform(0.5, 30)};
}

TEST(IouTest, Examples) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(Iou(a, a), 1.0);
  EXPECT_EQ(Iou(a, {20, 20, 30, 30}), 0.0);
  EXPECT_EQ(Iou(a, {10, 0, 20, 10}), 0.0) << "touching edges";
  // Intersection 5x10 = 50, union 100 + 100 - 50 = 150.
  EXPECT_DOUBLE_EQ(Iou(a, {5, 0, 15, 10}), 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(Iou(a, {2, 2, 4, 4}), 4.0 / 100.0);
}

TEST(IouTest, PropertiesOnRandomBoxes) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = RandomBox(rng);
    const BoundingBox b = RandomBox(rng);
    const double v = Iou(a, b);
    EXPECT_EQ(v, Iou(b, a));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(Iou(a, a), 1.0, 1e-15);
  }
}

TEST(MergeTracksTest, StaticBoxGivesOneTrack) {
  DetectionSet d;
  for (int f = 0; f < 10; ++f) d.push_back(Frame(f, {{10, 10, 20, 20}}));
  auto tracks = MergeTracks(d, 0.5, 1);
  ASSERT_TRUE(tracks.ok());
  ASSERT_EQ(tracks->size(), 1u);
  EXPECT_EQ((*tracks)[0].observations.size(), 10u);
}

TEST(MergeTracksTest, TwoDisjointStreams) {
  DetectionSet d;
  for (int f = 0; f < 6; ++f) {
    d.push_back(Frame(f, {{0, 0, 10, 10}, {50, 50, 60, 60}}));
  }
  auto tracks = MergeTracks(d, 0.5, 1);
  ASSERT_TRUE(tracks.ok());
  ASSERT_EQ(tracks->size(), 2u);
  EXPECT_EQ((*tracks)[0].observations[5].box, (BoundingBox{0, 0, 10, 10}));
  EXPECT_EQ((*tracks)[1].observations[5].box, (BoundingBox{50, 50, 60, 60}));
}

TEST(MergeTracksTest, TeleportingBoxStartsNewTrackEveryFrame) {
  DetectionSet d;
  for (int f = 0; f < 5; ++f) {
    const double x = 100.0 * f;
    d.push_back(Frame(f, {{x, 0, x + 10, 10}}));
  }
  auto tracks = MergeTracks(d, 0.5, 1);
  ASSERT_TRUE(tracks.ok());
  ASSERT_EQ(tracks->size(), 5u);
  for (const FaceTrack& t : *tracks) EXPECT_EQ(t.observations.size(), 1u);
}

TEST(MergeTracksTest, GapRule) {
  DetectionSet d = {Frame(0, {{0, 0, 10, 10}}), Frame(3, {{0, 0, 10, 10}})};
  EXPECT_EQ(MergeTracks(d, 0.5, 1)->size(), 2u);
  EXPECT_EQ(MergeTracks(d, 0.5, 2)->size(), 2u);
  EXPECT_EQ(MergeTracks(d, 0.5, 3)->size(), 1u);
}

TEST(MergeTracksTest, TiesGoToLargerIouThenOlderTrack) {
  // Two tracks with identical last boxes compete for one detection.
  DetectionSet d = {Frame(0, {{0, 0, 10, 10}, {0, 0, 10, 10}}),
                    Frame(1, {{1, 0, 11, 10}})};
  auto tracks = MergeTracks(d, 0.5, 1);
  ASSERT_TRUE(tracks.ok());
  ASSERT_EQ(tracks->size(), 2u);
  EXPECT_EQ((*tracks)[0].observations.size(), 2u);
  EXPECT_EQ((*tracks)[1].observations.size(), 1u);

  // The detection nearer to track 1 wins it even though track 0 is older.
  d = {Frame(0, {{0, 0, 10, 10}, {4, 0, 14, 10}}), Frame(1, {{4, 0, 14, 10}})};
  tracks = MergeTracks(d, 0.3, 1);
  ASSERT_TRUE(tracks.ok());
  EXPECT_EQ((*tracks)[0].observations.size(), 1u);
  EXPECT_EQ((*tracks)[1].observations.size(), 2u);
}

TEST(MergeTracksTest, ThresholdIsInclusive) {
  // IoU exactly 1/3.
  DetectionSet d = {Frame(0, {{0, 0, 10, 10}}), Frame(1, {{5, 0, 15, 10}})};
  EXPECT_EQ(MergeTracks(d, 1.0 / 3.0, 1)->size(), 1u);
  EXPECT_EQ(MergeTracks(d, 0.34, 1)->size(), 2u);
}

TEST(MergeTracksTest, RejectsBadInput) {
  DetectionSet d = {Frame(0, {{0, 0, 10, 10}})};
  EXPECT_FALSE(MergeTracks(d, 0.0, 1).ok());
  EXPECT_FALSE(MergeTracks(d, 1.5, 1).ok());
  EXPECT_FALSE(MergeTracks(d, 0.5, 0).ok());
  EXPECT_FALSE(MergeTracks({Frame(-1, {{0, 0, 1, 1}})}, 0.5, 1).ok());
  EXPECT_FALSE(MergeTracks({Frame(2, {{0, 0, 1, 1}}), Frame(2, {})}, 0.5, 1).ok());
  EXPECT_FALSE(MergeTracks({Frame(2, {{3, 0, 1, 1}})}, 0.5, 1).ok());
}

TEST(MergeTracksTest, PartitionsDetectionsAndRespectsGaps) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    DetectionSet d;
    std::multiset<std::pair<int, std::tuple<double, double, double, double>>> input;
    const int max_gap = 1 + static_cast<int>(rng.UniformInt(3));
    int frame = 0;
    std::vector<BoundingBox> movers(1 + rng.UniformInt(4));
    for (BoundingBox& b : movers) b = RandomBox(rng);
    for (int f = 0; f < 20; ++f) {
      frame += 1 + static_cast<int>(rng.UniformInt(3));
      std::vector<BoundingBox> boxes;
      for (BoundingBox& b : movers) {
        const double dx = rng.Uniform(-3, 3);
        b = {std::max(0.0, b.x_min + dx), b.y_min, std::max(0.0, b.x_min + dx) + b.Width(),
             b.y_max};
        if (rng.Bernoulli(0.8)) boxes.push_back(b);
      }
      if (rng.Bernoulli(0.2)) boxes.push_back(RandomBox(rng));
      for (const BoundingBox& b : boxes)
        input.insert({frame, {b.x_min, b.y_min, b.x_max, b.y_max}});
      d.push_back(Frame(frame, boxes));
    }
    rng.Shuffle(d);
    auto tracks = MergeTracks(d, 0.3, max_gap);
    ASSERT_TRUE(tracks.ok());
    std::multiset<std::pair<int, std::tuple<double, double, double, double>>> output;
    for (const FaceTrack& t : *tracks) {
      ASSERT_FALSE(t.observations.empty());
      for (size_t i = 0; i < t.observations.size(); ++i) {
        const FaceObservation& o = t.observations[i];
        output.insert({o.frame_index, {o.box.x_min, o.box.y_min, o.box.x_max, o.box.y_max}});
        if (i > 0) {
          const int step = o.frame_index - t.observations[i - 1].frame_index;
          EXPECT_GT(step, 0);
          EXPECT_LE(step, max_gap);
        }
      }
    }
    EXPECT_EQ(input, output);
  }
}

TEST(CleanTracksTest, Examples) {
  auto track_of_length = [](int n) {
    FaceTrack t;
    for (int i = 0; i < n; ++i) t.observations.push_back(Obs(i, {0, 0, 1, 1}));
    return t;
  };
  std::vector<FaceTrack> tracks = {track_of_length(1), track_of_length(5), track_of_length(1)};
  auto kept = CleanTracks(tracks, 2);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].observations.size(), 5u);
  EXPECT_EQ(CleanTracks(tracks, 1), tracks);
  EXPECT_TRUE(CleanTracks(tracks, 6).empty());
}

TEST(CleanTracksTest, OutputIsSubsequence) {
  Rng rng(3);
  std::vector<FaceTrack> tracks;
  for (int k = 0; k < 50; ++k) {
    FaceTrack t;
    const size_t n = 1 + rng.UniformInt(6);
    for (size_t i = 0; i < n; ++i)
      t.observations.push_back(Obs(static_cast<int>(i) + k, {0, 0, 1, 1}));
    tracks.push_back(t);
  }
  auto kept = CleanTracks(tracks, 3);
  size_t j = 0;
  for (const FaceTrack& t : kept) {
    while (j < tracks.size() && !(tracks[j] == t)) ++j;
    ASSERT_LT(j, tracks.size());
    ++j;
  }
}

TEST(KeyFrameTest, ArgmaxOfCounts) {
  const std::vector<int> a = {1, 3, 2};
  EXPECT_EQ(*ArgmaxFaceCount(a), 1);
  const std::vector<int> b = {2, 2};
  EXPECT_EQ(*ArgmaxFaceCount(b), 0);
  const std::vector<int> zeros = {0, 0, 0};
  EXPECT_EQ(*ArgmaxFaceCount(zeros, 0), 0);
  EXPECT_FALSE(ArgmaxFaceCount(zeros).ok());
  EXPECT_FALSE(ArgmaxFaceCount(std::vector<int>{}).ok());
}

TEST(KeyFrameTest, SelectsFrameWithMostActiveTracks) {
  Turn turn = testing::MakeTurn("ross", 0, 10);
  FaceTrack a;
  a.observations = {Obs(10, {0, 0, 1, 1}), Obs(20, {0, 0, 1, 1}), Obs(30, {0, 0, 1, 1})};
  FaceTrack b;
  b.observations = {Obs(25, {5, 5, 6, 6}), Obs(40, {5, 5, 6, 6})};
  turn.tracks = {a, b};
  // Frame 25 sits inside both tracks' spans; frame 30 does too but is later.
  EXPECT_EQ(*SelectKeyFrame(turn), 25);

  Turn empty = testing::MakeTurn("ross", 0, 1);
  EXPECT_FALSE(SelectKeyFrame(empty).ok());
  EXPECT_EQ(*SelectKeyFrame(empty, 7), 7);
}

TEST(DetectionsIoTest, RoundTrip) {
  DetectionSet d = {Frame(0, {{0, 0, 10, 10}}), Frame(4, {})};
  d[0].detections[0].embedding = std::vector<double>{0.1, -0.2, 1.0 / 3.0};
  d[1].detections.push_back({{1.5, 2.5, 3.5, 4.5}, std::nullopt});
  const std::string path = ::testing::TempDir() + "/detections.jsonl";
  ASSERT_TRUE(SaveDetections(d, path).ok());
  auto loaded = LoadDetections(path);
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(*loaded, d);
}

}  // namespace
}  // namespace mmspeaker
