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

// On-disk formats.
//
// Sessions file: one JSON object per line.
//   {"source_id": str,
//    "turns": [{"utterance": str, "speaker": str?, "start_time": num,
//               "end_time": num, "key_frame": int?,
//               "tracks": [{"label": str?, "speaking_prob": num?,
//                           "observations": [{"frame_index": int,
//                                             "box": [x0, y0, x1, y1],
//                                             "embedding": [num...]?}]}]}]}
// Optional fields are omitted when absent. Reals are written in the
// shortest form that parses back to the same double.
//
// Score-table file: one JSON object per line,
//   {"id": str?, "rows": [str...], "cols": [str...], "values": [num...]}
// with values in row-major order.
//
// Roster file: one character name per line; blank lines and lines starting
// with '#' are ignored.

#ifndef MMSPEAKER_CORPUS_IO_H_
#define MMSPEAKER_CORPUS_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mmspeaker/corpus.h"

namespace mmspeaker {

std::string SerializeSession(const Session& session);
absl::StatusOr<Session> ParseSession(std::string_view line);

// Parses and validates every line. Errors name the 1-based line number and
// the offending field.
absl::StatusOr<std::vector<Session>> LoadSessions(
    const std::string& path, const ValidationOptions& options = {});
absl::Status SaveSessions(const std::vector<Session>& sessions,
                          const std::string& path);

// Track file: one track object per line, same schema as inside a turn.
std::string SerializeTrack(const FaceTrack& track);
absl::StatusOr<FaceTrack> ParseTrack(std::string_view line);
absl::StatusOr<std::vector<FaceTrack>> LoadTracks(const std::string& path);
absl::Status SaveTracks(const std::vector<FaceTrack>& tracks,
                        const std::string& path);

std::string SerializeScoreTable(const ScoreTable& table);
absl::StatusOr<ScoreTable> ParseScoreTable(std::string_view line);

absl::StatusOr<std::vector<ScoreTable>> LoadScoreTables(
    const std::string& path);
absl::Status SaveScoreTables(const std::vector<ScoreTable>& tables,
                             const std::string& path);

// Single-table convenience wrappers; the file must hold exactly one table.
absl::StatusOr<ScoreTable> LoadScoreTable(const std::string& path);
absl::Status SaveScoreTable(const ScoreTable& table, const std::string& path);

// One table per session (id = session index) for the similarity and
// embedding files.
std::vector<ScoreTable> MatricesToTables(const std::vector<Matrix>& matrices,
                                         const std::string& col_prefix);
absl::StatusOr<std::vector<Matrix>> TablesToMatrices(
    const std::vector<ScoreTable>& tables, size_t expected_count);

// Speaking-probability table: rows "<session>:<turn>:<track>", one column
// "speaking_prob".
ScoreTable ExtractSpeakingScores(const std::vector<Session>& sessions);
absl::Status ApplySpeakingScores(const ScoreTable& table,
                                 std::vector<Session>& sessions);

absl::StatusOr<Roster> LoadRoster(const std::string& path);
absl::Status SaveRoster(const Roster& roster, const std::string& path);

// Line-oriented helpers shared by the other file formats.
absl::StatusOr<std::vector<std::string>> ReadLines(const std::string& path);
absl::Status WriteText(const std::string& path, std::string_view text);

}  // namespace mmspeaker

#endif  // MMSPEAKER_CORPUS_IO_H_
