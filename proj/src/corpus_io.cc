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

#include "mmspeaker/corpus_io.h"

#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "mmspeaker/json_fields.h"
#include "mmspeaker/status_macros.h"

namespace mmspeaker {
namespace {

Json BoxToJson(const BoundingBox& box) {
  return Json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

Json TrackToJson(const FaceTrack& track) {
  Json j = Json::object();
  if (track.label) j["label"] = track.label->name();
  if (track.speaking_prob) j["speaking_prob"] = *track.speaking_prob;
  Json observations = Json::array();
  for (const FaceObservation& obs : track.observations) {
    Json o = Json::object();
    o["frame_index"] = obs.frame_index;
    o["box"] = BoxToJson(obs.box);
    if (obs.embedding) o["embedding"] = *obs.embedding;
    observations.push_back(std::move(o));
  }
  j["observations"] = std::move(observations);
  return j;
}

Json TurnToJson(const Turn& turn) {
  Json j = Json::object();
  j["utterance"] = turn.utterance;
  if (turn.speaker) j["speaker"] = turn.speaker->name();
  j["start_time"] = turn.start_time;
  j["end_time"] = turn.end_time;
  if (turn.key_frame) j["key_frame"] = *turn.key_frame;
  Json tracks = Json::array();
  for (const FaceTrack& track : turn.tracks) tracks.push_back(TrackToJson(track));
  j["tracks"] = std::move(tracks);
  return j;
}

absl::StatusOr<const Json*> ArrayField(const Json& object, const char* key,
                                       const std::string& prefix) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_array()) {
    return absl::DataLossError(
        absl::StrCat("field '", prefix, key, "': expected an array"));
  }
  return &*it;
}

absl::StatusOr<BoundingBox> BoxFromJson(const Json& j,
                                        const std::string& prefix) {
  ASSIGN_OR_RETURN(std::vector<double> v,
                   RequiredField<std::vector<double>>(j, "box", prefix));
  if (v.size() != 4) {
    return absl::DataLossError(
        absl::StrCat("field '", prefix, "box': expected 4 numbers"));
  }
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

absl::StatusOr<FaceTrack> TrackFromJson(const Json& j,
                                        const std::string& prefix) {
  FaceTrack track;
  ASSIGN_OR_RETURN(std::optional<std::string> label,
                   OptionalField<std::string>(j, "label", prefix));
  if (label) track.label = CharacterId(*label);
  ASSIGN_OR_RETURN(track.speaking_prob,
                   OptionalField<double>(j, "speaking_prob", prefix));
  ASSIGN_OR_RETURN(const Json* observations,
                   ArrayField(j, "observations", prefix));
  for (size_t i = 0; i < observations->size(); ++i) {
    const Json& o = (*observations)[i];
    const std::string p = absl::StrCat(prefix, "observations[", i, "].");
    FaceObservation obs;
    ASSIGN_OR_RETURN(obs.frame_index, RequiredField<int>(o, "frame_index", p));
    ASSIGN_OR_RETURN(obs.box, BoxFromJson(o, p));
    ASSIGN_OR_RETURN(obs.embedding,
                     OptionalField<std::vector<double>>(o, "embedding", p));
    track.observations.push_back(std::move(obs));
  }
  return track;
}

absl::StatusOr<Turn> TurnFromJson(const Json& j, const std::string& prefix) {
  Turn turn;
  ASSIGN_OR_RETURN(turn.utterance,
                   RequiredField<std::string>(j, "utterance", prefix));
  ASSIGN_OR_RETURN(std::optional<std::string> speaker,
                   OptionalField<std::string>(j, "speaker", prefix));
  if (speaker) turn.speaker = CharacterId(*speaker);
  ASSIGN_OR_RETURN(turn.start_time,
                   RequiredField<double>(j, "start_time", prefix));
  ASSIGN_OR_RETURN(turn.end_time, RequiredField<double>(j, "end_time", prefix));
  ASSIGN_OR_RETURN(turn.key_frame, OptionalField<int>(j, "key_frame", prefix));
  ASSIGN_OR_RETURN(const Json* tracks, ArrayField(j, "tracks", prefix));
  for (size_t t = 0; t < tracks->size(); ++t) {
    ASSIGN_OR_RETURN(
        FaceTrack track,
        TrackFromJson((*tracks)[t], absl::StrCat(prefix, "tracks[", t, "].")));
    turn.tracks.push_back(std::move(track));
  }
  return turn;
}

absl::Status WithLine(const absl::Status& status, size_t line) {
  return absl::Status(status.code(),
                      absl::StrCat("line ", line, ": ", status.message()));
}

bool IsBlank(std::string_view line) {
  return absl::StripAsciiWhitespace(absl::string_view(line.data(), line.size())).empty();
}

}  // namespace

std::string SerializeSession(const Session& session) {
  Json j = Json::object();
  j["source_id"] = session.source_id;
  Json turns = Json::array();
  for (const Turn& turn : session.turns) turns.push_back(TurnToJson(turn));
  j["turns"] = std::move(turns);
  return j.dump();
}

absl::StatusOr<Session> ParseSession(std::string_view line) {
  ASSIGN_OR_RETURN(Json j, ParseJsonLine(line));
  Session session;
  ASSIGN_OR_RETURN(session.source_id, RequiredField<std::string>(j, "source_id"));
  ASSIGN_OR_RETURN(const Json* turns, ArrayField(j, "turns", ""));
  for (size_t i = 0; i < turns->size(); ++i) {
    ASSIGN_OR_RETURN(Turn turn,
                     TurnFromJson((*turns)[i], absl::StrCat("turns[", i, "].")));
    session.turns.push_back(std::move(turn));
  }
  return session;
}

absl::StatusOr<std::vector<std::string>> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) return absl::UnavailableError(absl::StrCat("read error ", path));
  return lines;
}

absl::Status WriteText(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) return absl::UnavailableError(absl::StrCat("write failed ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Session>> LoadSessions(
    const std::string& path, const ValidationOptions& options) {
  ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  std::vector<Session> sessions;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    absl::StatusOr<Session> session = ParseSession(lines[i]);
    if (!session.ok()) return WithLine(session.status(), i + 1);
    absl::Status valid = ValidateSession(*session, options);
    if (!valid.ok()) return WithLine(valid, i + 1);
    sessions.push_back(*std::move(session));
  }
  return sessions;
}

absl::Status SaveSessions(const std::vector<Session>& sessions,
                          const std::string& path) {
  std::string text;
  for (const Session& session : sessions) {
    RETURN_IF_ERROR(ValidateSession(session));
    absl::StrAppend(&text, SerializeSession(session), "\n");
  }
  return WriteText(path, text);
}

std::string SerializeTrack(const FaceTrack& track) {
  return TrackToJson(track).dump();
}

absl::StatusOr<FaceTrack> ParseTrack(std::string_view line) {
  ASSIGN_OR_RETURN(Json j, ParseJsonLine(line));
  return TrackFromJson(j, "");
}

absl::StatusOr<std::vector<FaceTrack>> LoadTracks(const std::string& path) {
  ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  std::vector<FaceTrack> tracks;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    absl::StatusOr<FaceTrack> track = ParseTrack(lines[i]);
    if (!track.ok()) return WithLine(track.status(), i + 1);
    absl::Status valid = ValidateTrack(*track);
    if (!valid.ok()) return WithLine(valid, i + 1);
    tracks.push_back(*std::move(track));
  }
  return tracks;
}

absl::Status SaveTracks(const std::vector<FaceTrack>& tracks,
                        const std::string& path) {
  std::string text;
  for (const FaceTrack& track : tracks) {
    RETURN_IF_ERROR(ValidateTrack(track));
    absl::StrAppend(&text, SerializeTrack(track), "\n");
  }
  return WriteText(path, text);
}

std::string SerializeScoreTable(const ScoreTable& table) {
  Json j = Json::object();
  if (table.id) j["id"] = *table.id;
  j["rows"] = table.rows;
  j["cols"] = table.cols;
  Json values = Json::array();
  for (double v : table.values.data()) values.push_back(v);
  j["values"] = std::move(values);
  return j.dump();
}

absl::StatusOr<ScoreTable> ParseScoreTable(std::string_view line) {
  ASSIGN_OR_RETURN(Json j, ParseJsonLine(line));
  ScoreTable table;
  ASSIGN_OR_RETURN(table.id, OptionalField<std::string>(j, "id"));
  ASSIGN_OR_RETURN(table.rows, RequiredField<std::vector<std::string>>(j, "rows"));
  ASSIGN_OR_RETURN(table.cols, RequiredField<std::vector<std::string>>(j, "cols"));
  ASSIGN_OR_RETURN(std::vector<double> values,
                   RequiredField<std::vector<double>>(j, "values"));
  if (values.size() != table.rows.size() * table.cols.size()) {
    return absl::DataLossError(absl::StrCat(
        "field 'values': expected ", table.rows.size() * table.cols.size(),
        " entries, got ", values.size()));
  }
  table.values = Matrix(table.rows.size(), table.cols.size(), std::move(values));
  RETURN_IF_ERROR(ValidateScoreTable(table));
  return table;
}

absl::StatusOr<std::vector<ScoreTable>> LoadScoreTables(
    const std::string& path) {
  ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  std::vector<ScoreTable> tables;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    absl::StatusOr<ScoreTable> table = ParseScoreTable(lines[i]);
    if (!table.ok()) return WithLine(table.status(), i + 1);
    tables.push_back(*std::move(table));
  }
  return tables;
}

absl::Status SaveScoreTables(const std::vector<ScoreTable>& tables,
                             const std::string& path) {
  std::string text;
  for (const ScoreTable& table : tables) {
    RETURN_IF_ERROR(ValidateScoreTable(table));
    absl::StrAppend(&text, SerializeScoreTable(table), "\n");
  }
  return WriteText(path, text);
}

absl::StatusOr<ScoreTable> LoadScoreTable(const std::string& path) {
  ASSIGN_OR_RETURN(std::vector<ScoreTable> tables, LoadScoreTables(path));
  if (tables.size() != 1) {
    return absl::DataLossError(absl::StrCat(
        path, ": expected exactly one score table, found ", tables.size()));
  }
  return std::move(tables.front());
}

absl::Status SaveScoreTable(const ScoreTable& table, const std::string& path) {
  return SaveScoreTables({table}, path);
}

std::vector<ScoreTable> MatricesToTables(const std::vector<Matrix>& matrices,
                                         const std::string& col_prefix) {
  std::vector<ScoreTable> tables;
  tables.reserve(matrices.size());
  for (size_t s = 0; s < matrices.size(); ++s) {
    ScoreTable t;
    t.id = absl::StrCat(s);
    for (size_t r = 0; r < matrices[s].rows(); ++r) t.rows.push_back(absl::StrCat(r));
    for (size_t c = 0; c < matrices[s].cols(); ++c)
      t.cols.push_back(absl::StrCat(col_prefix, c));
    t.values = matrices[s];
    tables.push_back(std::move(t));
  }
  return tables;
}

absl::StatusOr<std::vector<Matrix>> TablesToMatrices(
    const std::vector<ScoreTable>& tables, size_t expected_count) {
  if (tables.size() != expected_count) {
    return absl::DataLossError(absl::StrCat("expected ", expected_count,
                                            " tables, found ", tables.size()));
  }
  std::vector<Matrix> out;
  out.reserve(tables.size());
  for (size_t s = 0; s < tables.size(); ++s) {
    if (tables[s].id && *tables[s].id != absl::StrCat(s)) {
      return absl::DataLossError(absl::StrCat(
          "table ", s, " has id '", *tables[s].id, "', expected '", s, "'"));
    }
    out.push_back(tables[s].values);
  }
  return out;
}

ScoreTable ExtractSpeakingScores(const std::vector<Session>& sessions) {
  ScoreTable table;
  table.id = "speaking_prob";
  table.cols = {"speaking_prob"};
  std::vector<double> values;
  for (size_t s = 0; s < sessions.size(); ++s) {
    for (size_t t = 0; t < sessions[s].turns.size(); ++t) {
      const auto& tracks = sessions[s].turns[t].tracks;
      for (size_t k = 0; k < tracks.size(); ++k) {
        if (!tracks[k].speaking_prob) continue;
        table.rows.push_back(absl::StrCat(s, ":", t, ":", k));
        values.push_back(*tracks[k].speaking_prob);
      }
    }
  }
  table.values = Matrix(table.rows.size(), 1, std::move(values));
  return table;
}

absl::Status ApplySpeakingScores(const ScoreTable& table,
                                 std::vector<Session>& sessions) {
  if (table.cols.size() != 1) {
    return absl::DataLossError("speaking score table needs exactly one column");
  }
  for (size_t r = 0; r < table.rows.size(); ++r) {
    size_t s = 0, t = 0, k = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(table.rows[r]);
    if (!(in >> s >> c1 >> t >> c2 >> k) || c1 != ':' || c2 != ':' ||
        !in.eof()) {
      return absl::DataLossError(absl::StrCat(
          "speaking score row '", table.rows[r],
          "' is not <session>:<turn>:<track>"));
    }
    if (s >= sessions.size() || t >= sessions[s].turns.size() ||
        k >= sessions[s].turns[t].tracks.size()) {
      return absl::DataLossError(absl::StrCat(
          "speaking score row '", table.rows[r], "' names no track"));
    }
    const double p = table.values(r, 0);
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::DataLossError(absl::StrCat(
          "speaking score row '", table.rows[r], "' outside [0, 1]"));
    }
    sessions[s].turns[t].tracks[k].speaking_prob = p;
  }
  return absl::OkStatus();
}

absl::StatusOr<Roster> LoadRoster(const std::string& path) {
  ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  Roster roster;
  for (const std::string& line : lines) {
    const absl::string_view stripped = absl::StripAsciiWhitespace(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    roster.insert(CharacterId(std::string(stripped)));
  }
  return roster;
}

absl::Status SaveRoster(const Roster& roster, const std::string& path) {
  std::string text;
  for (const CharacterId& id : roster) absl::StrAppend(&text, id.name(), "\n");
  return WriteText(path, text);
}

}  // namespace mmspeaker
