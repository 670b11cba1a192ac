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


#include "commands.h"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "mmspeaker/corpus.h"
#include "mmspeaker/corpus_io.h"
#include "mmspeaker/corpus_stats.h"
#include "mmspeaker/face_labeler.h"
#include "mmspeaker/json_fields.h"
#include "mmspeaker/random.h"
#include "mmspeaker/response_eval.h"
#include "mmspeaker/session_builder.h"
#include "mmspeaker/similarity_head.h"
#include "mmspeaker/speaker_solver.h"
#include "mmspeaker/status_macros.h"
#include "mmspeaker/synth_bench.h"
#include "mmspeaker/tracks.h"

namespace mmspeaker::cli {
namespace {

struct Common {
  bool print_config = false;
  int jobs = 1;
  uint64_t seed = 0;
};

void AddCommon(CLI::App* sub, Common& common, bool with_seed) {
  sub->add_flag("--print-config", common.print_config,
                "Print the resolved configuration and exit");
  sub->add_option("--jobs", common.jobs, "Worker threads across sessions")
      ->check(CLI::PositiveNumber);
  if (with_seed) sub->add_option("--seed", common.seed, "Random seed");
}

std::vector<CharacterId> RosterVector(const Roster& roster) {
  return {roster.begin(), roster.end()};
}

// ingest ---------------------------------------------------------------

struct IngestArgs {
  Common common;
  std::string input;
  std::string output;
  std::string roster;
  std::optional<int> max_frame_gap;
  std::optional<size_t> embedding_dim;
};

absl::Status RunIngest(const IngestArgs& a) {
  ValidationOptions options;
  options.max_frame_gap = a.max_frame_gap;
  options.embedding_dim = a.embedding_dim;
  Roster roster;
  if (!a.roster.empty()) {
    ASSIGN_OR_RETURN(roster, LoadRoster(a.roster));
    options.roster = &roster;
  }
  ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.input, options));
  size_t turns = 0;
  size_t tracks = 0;
  for (const Session& s : sessions) {
    turns += s.turns.size();
    for (const Turn& t : s.turns) tracks += t.tracks.size();
  }
  std::cout << absl::StrFormat("ingested %d sessions, %d turns, %d tracks\n",
                               sessions.size(), turns, tracks);
  if (!a.output.empty()) RETURN_IF_ERROR(SaveSessions(sessions, a.output));
  return absl::OkStatus();
}

// tracks ---------------------------------------------------------------

struct TracksArgs {
  Common common;
  std::string detections;
  std::string output;
  TrackLinkOptions link;
};

absl::Status RunTracks(const TracksArgs& a) {
  ASSIGN_OR_RETURN(DetectionSet detections, LoadDetections(a.detections));
  ASSIGN_OR_RETURN(std::vector<FaceTrack> tracks,
                   MergeTracks(detections, a.link.iou_link_threshold, a.link.max_gap));
  const size_t merged = tracks.size();
  tracks = CleanTracks(std::move(tracks), a.link.min_len);
  std::cout << absl::StrFormat("merged %d tracks, kept %d with length >= %d\n",
                               merged, tracks.size(), a.link.min_len);
  return SaveTracks(tracks, a.output);
}

// label ----------------------------------------------------------------

struct LabelArgs {
  Common common;
  std::string input;
  std::string format = "sessions";
  std::string prototypes;
  std::string output;
  std::string reference;
  LabelOptions label;
  double iou_match = 0.5;
};

absl::Status LabelAll(std::vector<FaceTrack>& tracks, const PrototypeBank& bank,
                      const LabelOptions& options, size_t& labelled) {
  for (FaceTrack& track : tracks) {
    ASSIGN_OR_RETURN(std::optional<CharacterId> who, LabelTrack(track, bank, options));
    track.label = who;
    if (who) ++labelled;
  }
  return absl::OkStatus();
}

absl::Status RunLabel(const LabelArgs& a) {
  ASSIGN_OR_RETURN(ScoreTable table, LoadScoreTable(a.prototypes));
  ASSIGN_OR_RETURN(PrototypeBank bank, PrototypeBank::FromScoreTable(table));
  size_t labelled = 0;
  size_t total = 0;
  std::optional<LabelValidationReport> report;
  if (a.format == "tracks") {
    ASSIGN_OR_RETURN(std::vector<FaceTrack> tracks, LoadTracks(a.input));
    total = tracks.size();
    RETURN_IF_ERROR(LabelAll(tracks, bank, a.label, labelled));
    if (!a.reference.empty()) {
      ASSIGN_OR_RETURN(std::vector<FaceTrack> ref, LoadTracks(a.reference));
      ASSIGN_OR_RETURN(report, ValidateLabels(tracks, ref, a.iou_match));
    }
    RETURN_IF_ERROR(SaveTracks(tracks, a.output));
  } else {
    ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.input, {}));
    for (Session& s : sessions) {
      for (Turn& t : s.turns) {
        total += t.tracks.size();
        RETURN_IF_ERROR(LabelAll(t.tracks, bank, a.label, labelled));
      }
    }
    if (!a.reference.empty()) {
      ASSIGN_OR_RETURN(std::vector<Session> ref, LoadSessions(a.reference, {}));
      if (ref.size() != sessions.size()) {
        return absl::FailedPreconditionError(
            "reference and input have different session counts");
      }
      std::vector<FaceTrack> all_auto;
      std::vector<FaceTrack> all_ref;
      LabelValidationReport sum;
      for (size_t s = 0; s < sessions.size(); ++s) {
        if (ref[s].turns.size() != sessions[s].turns.size()) {
          return absl::FailedPreconditionError(
              absl::StrCat("session ", s, ": reference turn count differs"));
        }
        for (size_t t = 0; t < sessions[s].turns.size(); ++t) {
          ASSIGN_OR_RETURN(LabelValidationReport r,
                           ValidateLabels(sessions[s].turns[t].tracks,
                                          ref[s].turns[t].tracks, a.iou_match));
          sum.matched_pairs += r.matched_pairs;
          sum.correct_pairs += r.correct_pairs;
          sum.unmatched_auto += r.unmatched_auto;
          sum.unmatched_reference += r.unmatched_reference;
        }
      }
      sum.accuracy = sum.matched_pairs == 0
                         ? 0.0
                         : static_cast<double>(sum.correct_pairs) /
                               static_cast<double>(sum.matched_pairs);
      report = sum;
    }
    RETURN_IF_ERROR(SaveSessions(sessions, a.output));
  }
  std::cout << absl::StrFormat("labelled %d of %d tracks (t=%.3f, k=%d)\n", labelled,
                               total, a.label.threshold, a.label.top_k);
  if (report) {
    std::cout << absl::StrFormat(
        "validation: %d matched pairs, %d correct, accuracy %.2f%%\n",
        report->matched_pairs, report->correct_pairs, 100.0 * report->accuracy);
  }
  return absl::OkStatus();
}

// sessions -------------------------------------------------------------

struct SessionsArgs {
  Common common;
  std::string input;
  std::string roster;
  std::string output;
  WindowOptions window;
  bool key_frames = false;
};

absl::Status RunSessions(const SessionsArgs& a) {
  ASSIGN_OR_RETURN(std::vector<Session> episodes, LoadSessions(a.input, {}));
  ASSIGN_OR_RETURN(Roster roster, LoadRoster(a.roster));
  std::vector<Session> windows;
  for (const Session& episode : episodes) {
    ASSIGN_OR_RETURN(std::vector<Session> w, SlideWindows(episode, roster, a.window));
    for (Session& s : w) windows.push_back(std::move(s));
  }
  if (a.key_frames) {
    for (Session& s : windows) {
      for (Turn& t : s.turns) {
        if (t.key_frame || t.tracks.empty()) continue;
        ASSIGN_OR_RETURN(int frame, SelectKeyFrame(t));
        t.key_frame = frame;
      }
    }
  }
  std::cout << absl::StrFormat("%d episodes -> %d sessions (m=%d, gap<%.2fs)\n",
                               episodes.size(), windows.size(), a.window.window_size,
                               a.window.max_gap_seconds);
  return SaveSessions(windows, a.output);
}

// noisy ----------------------------------------------------------------

struct NoisyArgs {
  Common common;
  std::string input;
  std::string output;
  double fraction = 0.2;
};

absl::Status RunNoisy(const NoisyArgs& a) {
  ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.input, {}));
  ASSIGN_OR_RETURN(std::vector<Session> noisy,
                   MakeNoisyCorpus(sessions, a.fraction, a.common.seed));
  size_t before = 0;
  size_t after = 0;
  for (const Session& s : sessions) before += CountLabelledTracks(s);
  for (const Session& s : noisy) after += CountLabelledTracks(s);
  std::cout << absl::StrFormat("# seed %d\nremoved %d of %d labelled tracks\n",
                               a.common.seed, before - after, before);
  return SaveSessions(noisy, a.output);
}

// train-head -----------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string sessions;
  std::string embeddings;
  std::string params_in;
  std::string params_out;
  std::string similarity_out;
  std::string loss_trace;
  std::string optimizer = "sgd";
  TrainConfig train;
};

absl::Status RunTrainHead(TrainArgs a) {
  ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.sessions, {}));
  ASSIGN_OR_RETURN(std::vector<ScoreTable> tables, LoadScoreTables(a.embeddings));
  ASSIGN_OR_RETURN(std::vector<Matrix> embeddings,
                   TablesToMatrices(tables, sessions.size()));
  HeadParams params;
  if (!a.params_in.empty()) {
    ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(a.params_in));
    ASSIGN_OR_RETURN(params, ParseHeadParams(absl::StrJoin(lines, "\n")));
  } else {
    if (a.optimizer == "adam") {
      a.train.optimizer = Optimizer::kAdam;
    } else if (a.optimizer != "sgd") {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown optimizer '", a.optimizer, "'"));
    }
    a.train.seed = a.common.seed;
    std::vector<HeadExample> dataset;
    for (size_t s = 0; s < sessions.size(); ++s) {
      dataset.push_back({embeddings[s], SameSpeakerLabels(sessions[s])});
    }
    ASSIGN_OR_RETURN(TrainResult result, TrainHead(dataset, a.train));
    params = std::move(result.params);
    std::cout << absl::StrFormat("# seed %d\ntrained %d epochs, final loss %.6f\n",
                                 a.train.seed, result.loss_trace.size(),
                                 result.loss_trace.empty() ? 0.0
                                                           : result.loss_trace.back());
    if (!a.loss_trace.empty()) {
      std::string text = "epoch\tloss\n";
      for (size_t e = 0; e < result.loss_trace.size(); ++e)
        absl::StrAppend(&text, e + 1, "\t", absl::StrFormat("%.17g", result.loss_trace[e]), "\n");
      RETURN_IF_ERROR(WriteText(a.loss_trace, text));
    }
  }
  if (!a.params_out.empty()) {
    RETURN_IF_ERROR(WriteText(a.params_out, SerializeHeadParams(params) + "\n"));
  }
  double acc_sum = 0.0;
  std::vector<Matrix> sims;
  for (size_t s = 0; s < sessions.size(); ++s) {
    ASSIGN_OR_RETURN(Matrix p, HeadForward(params, embeddings[s]));
    acc_sum += PairwiseAccuracy(p, SameSpeakerLabels(sessions[s]));
    sims.push_back(std::move(p));
  }
  if (!sessions.empty()) {
    std::cout << absl::StrFormat("pairwise accuracy %.2f%%\n",
                                 100.0 * acc_sum / static_cast<double>(sessions.size()));
  }
  if (!a.similarity_out.empty()) {
    RETURN_IF_ERROR(SaveScoreTables(MatricesToTables(sims, ""), a.similarity_out));
  }
  return absl::OkStatus();
}

// solve / sweep-alpha --------------------------------------------------

struct SolveInputs {
  std::string sessions;
  std::string similarity;
  std::string m1_scores;
  std::string fallback_roster;
  std::string solver = "bnb";
  int64_t budget = kDefaultEnumerationBudget;
  int local_restarts = 4;
};

void AddSolveInputs(CLI::App* sub, SolveInputs& in) {
  sub->add_option("--sessions", in.sessions, "Session file")->required();
  sub->add_option("--similarity", in.similarity,
                  "Per-session p_sim tables; omitted means no text reward");
  sub->add_option("--m1-scores", in.m1_scores,
                  "Speaking-probability table overriding the session file");
  sub->add_option("--fallback-roster", in.fallback_roster,
                  "Roster for sessions without any labelled face");
  sub->add_option("--solver", in.solver, "exact, bnb or local")
      ->check(CLI::IsMember({"exact", "bnb", "local"}));
  sub->add_option("--budget", in.budget, "Enumeration budget for the exact solver");
  sub->add_option("--local-restarts", in.local_restarts,
                  "Random restarts of the local solver");
}

struct LoadedSolveInputs {
  std::vector<Session> sessions;
  std::vector<Matrix> p_sims;
  IdentifyOptions options;
};

absl::StatusOr<LoadedSolveInputs> LoadSolveInputs(const SolveInputs& in,
                                                  uint64_t seed) {
  LoadedSolveInputs out;
  ASSIGN_OR_RETURN(out.sessions, LoadSessions(in.sessions, {}));
  if (!in.m1_scores.empty()) {
    ASSIGN_OR_RETURN(ScoreTable m1, LoadScoreTable(in.m1_scores));
    RETURN_IF_ERROR(ApplySpeakingScores(m1, out.sessions));
  }
  if (!in.similarity.empty()) {
    ASSIGN_OR_RETURN(std::vector<ScoreTable> tables, LoadScoreTables(in.similarity));
    ASSIGN_OR_RETURN(out.p_sims, TablesToMatrices(tables, out.sessions.size()));
  } else {
    out.p_sims.assign(out.sessions.size(), Matrix());
  }
  ASSIGN_OR_RETURN(out.options.solver, ParseSolverMethod(in.solver));
  out.options.budget = in.budget;
  out.options.local.restarts = in.local_restarts;
  out.options.local.seed = seed;
  out.options.seed = seed;
  if (!in.fallback_roster.empty()) {
    ASSIGN_OR_RETURN(Roster roster, LoadRoster(in.fallback_roster));
    out.options.fallback_roster = RosterVector(roster);
  }
  return out;
}

struct SolveArgs {
  Common common;
  SolveInputs inputs;
  double alpha = 0.8;
  std::string output;
  std::string report;
  std::string label;
};

absl::Status RunSolve(const SolveArgs& a) {
  ASSIGN_OR_RETURN(LoadedSolveInputs in, LoadSolveInputs(a.inputs, a.common.seed));
  ASSIGN_OR_RETURN(std::vector<SpeakerPrediction> predictions,
                   IdentifyCorpus(in.sessions, in.p_sims, a.alpha, in.options,
                                  a.common.jobs));
  ASSIGN_OR_RETURN(double accuracy, Accuracy(predictions, in.sessions));
  size_t fallbacks = 0;
  size_t turns = 0;
  std::string lines;
  for (size_t s = 0; s < predictions.size(); ++s) {
    const SpeakerPrediction& p = predictions[s];
    Json j;
    j["session"] = s;
    j["source_id"] = in.sessions[s].source_id;
    Json names = Json::array();
    for (const CharacterId& c : p.speakers) names.push_back(c.name());
    j["speakers"] = names;
    j["fallback"] = p.used_fallback;
    if (p.assignment) j["objective"] = p.assignment->objective;
    lines += j.dump() + "\n";
    fallbacks += p.used_fallback ? 1 : 0;
    turns += p.speakers.size();
  }
  if (!a.output.empty()) RETURN_IF_ERROR(WriteText(a.output, lines));
  const std::string label =
      a.label.empty() ? absl::StrFormat("alpha=%.2f", a.alpha) : a.label;
  Json report;
  report["kind"] = "speaker_id";
  report["label"] = label;
  report["seed"] = a.common.seed;
  report["alpha"] = a.alpha;
  report["solver"] = a.inputs.solver;
  report["sessions"] = predictions.size();
  report["turns"] = turns;
  report["fallback_sessions"] = fallbacks;
  report["accuracy"] = accuracy;
  if (!a.report.empty()) RETURN_IF_ERROR(WriteText(a.report, report.dump(2) + "\n"));
  std::cout << absl::StrFormat(
      "# seed %d\nsolver %s, alpha %.2f: %d sessions, %d turns, %d fallback\n"
      "accuracy %.2f\n",
      a.common.seed, a.inputs.solver, a.alpha, predictions.size(), turns, fallbacks,
      100.0 * accuracy);
  return absl::OkStatus();
}

struct SweepArgs {
  Common common;
  SolveInputs inputs;
  std::vector<double> grid;
  std::string output;
  std::string label = "sweep";
};

absl::Status RunSweep(SweepArgs a) {
  if (a.grid.empty()) {
    for (int i = 0; i <= 10; ++i) a.grid.push_back(i / 10.0);
  }
  ASSIGN_OR_RETURN(LoadedSolveInputs in, LoadSolveInputs(a.inputs, a.common.seed));
  ASSIGN_OR_RETURN(std::vector<SweepPoint> points,
                   AlphaSweep(in.sessions, in.p_sims, a.grid, in.options, a.common.jobs));
  Json series;
  series["kind"] = "alpha_sweep";
  series["label"] = a.label;
  series["seed"] = a.common.seed;
  series["solver"] = a.inputs.solver;
  Json rows = Json::array();
  std::cout << absl::StrFormat("# seed %d\nalpha\taccuracy\n", a.common.seed);
  for (const SweepPoint& p : points) {
    rows.push_back(Json::array({p.alpha, p.accuracy}));
    std::cout << absl::StrFormat("%.4f\t%.2f\n", p.alpha, 100.0 * p.accuracy);
  }
  series["points"] = rows;
  if (!a.output.empty()) RETURN_IF_ERROR(WriteText(a.output, series.dump(2) + "\n"));
  return absl::OkStatus();
}

// respond-eval ---------------------------------------------------------

struct RespondArgs {
  Common common;
  std::string sessions;
  std::string roster;
  std::string mode = "none";
  size_t negatives = 9;
  std::string candidates_out;
  std::string perturbed_out;
  std::string candidates_in;
  std::string scores;
  std::string report;
  std::string label;
};

absl::Status RunRespondEval(const RespondArgs& a) {
  if (!a.scores.empty()) {
    if (a.candidates_in.empty()) {
      return absl::InvalidArgumentError("--scores needs --candidates");
    }
    ASSIGN_OR_RETURN(std::vector<ScoreTable> tables, LoadScoreTables(a.candidates_in));
    ASSIGN_OR_RETURN(std::vector<CandidateList> lists, CandidatesFromTables(tables));
    ASSIGN_OR_RETURN(ScoreTable scores, LoadScoreTable(a.scores));
    if (scores.rows.size() != lists.size()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "score table has ", scores.rows.size(), " items, candidate file ",
          lists.size()));
    }
    ASSIGN_OR_RETURN(std::vector<size_t> choices, SelectByScore(scores));
    std::vector<size_t> gold;
    for (const CandidateList& l : lists) gold.push_back(l.gold_index);
    ASSIGN_OR_RETURN(double accuracy, SelectionAccuracy(choices, gold));
    Json report;
    report["kind"] = "response_selection";
    report["label"] = a.label.empty() ? a.mode : a.label;
    report["items"] = lists.size();
    report["accuracy"] = accuracy;
    if (!a.report.empty()) RETURN_IF_ERROR(WriteText(a.report, report.dump(2) + "\n"));
    std::cout << absl::StrFormat("%d items, selection accuracy %.2f\n", lists.size(),
                                 100.0 * accuracy);
    return absl::OkStatus();
  }
  if (a.sessions.empty() || a.candidates_out.empty()) {
    return absl::InvalidArgumentError(
        "building candidates needs --sessions and --candidates-output");
  }
  ASSIGN_OR_RETURN(PerturbMode mode, ParsePerturbMode(a.mode));
  ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.sessions, {}));
  std::vector<CharacterId> roster;
  if (!a.roster.empty()) {
    ASSIGN_OR_RETURN(Roster r, LoadRoster(a.roster));
    roster = RosterVector(r);
  } else if (mode != PerturbMode::kNone) {
    return absl::InvalidArgumentError("perturbation modes need --roster");
  }
  ASSIGN_OR_RETURN(std::vector<Session> perturbed,
                   PerturbCorpus(sessions, mode, MixSeed(a.common.seed, 1), roster));
  ASSIGN_OR_RETURN(std::vector<CandidateList> lists,
                   BuildCandidates(perturbed, a.negatives, MixSeed(a.common.seed, 2)));
  RETURN_IF_ERROR(SaveScoreTables(CandidatesToTables(lists), a.candidates_out));
  if (!a.perturbed_out.empty()) RETURN_IF_ERROR(SaveSessions(perturbed, a.perturbed_out));
  std::cout << absl::StrFormat("# seed %d\n%d items, %d candidates each, mode %s\n",
                               a.common.seed, lists.size(), a.negatives + 1,
                               PerturbModeName(mode));
  return absl::OkStatus();
}

// synth ----------------------------------------------------------------

struct SynthArgs {
  Common common;
  std::string config;
  std::string output_dir;
  std::optional<size_t> num_sessions;
  std::optional<int> window_size;
  std::optional<double> p_vision_correct;
  std::optional<double> p_face_present;
  std::optional<double> sim_noise;
};

absl::StatusOr<SynthConfig> ResolveSynthConfig(const SynthArgs& a) {
  SynthConfig config;
  if (!a.config.empty()) {
    ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(a.config));
    ASSIGN_OR_RETURN(config, ParseSynthConfig(absl::StrJoin(lines, "\n")));
  }
  if (a.num_sessions) config.num_sessions = *a.num_sessions;
  if (a.window_size) config.window_size = *a.window_size;
  if (a.p_vision_correct) config.p_vision_correct = *a.p_vision_correct;
  if (a.p_face_present) config.p_face_present = *a.p_face_present;
  if (a.sim_noise) config.sim_noise = *a.sim_noise;
  RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::Status RunSynth(const SynthArgs& a) {
  ASSIGN_OR_RETURN(SynthConfig config, ResolveSynthConfig(a));
  ASSIGN_OR_RETURN(SynthCorpus corpus, GenerateCorpus(config, a.common.seed));
  std::error_code ec;
  std::filesystem::create_directories(a.output_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create '", a.output_dir, "': ", ec.message()));
  }
  RETURN_IF_ERROR(SaveSynthCorpus(corpus, a.output_dir));
  std::cout << absl::StrFormat("# seed %d\nwrote %d sessions to %s\n", a.common.seed,
                               corpus.sessions.size(), a.output_dir);
  return absl::OkStatus();
}

// stats ----------------------------------------------------------------

struct StatsArgs {
  Common common;
  std::string input;
  std::string output;
  StatisticsOptions options;
};

absl::Status RunStats(const StatsArgs& a) {
  ASSIGN_OR_RETURN(std::vector<Session> sessions, LoadSessions(a.input, {}));
  ASSIGN_OR_RETURN(CorpusStatistics stats, ComputeCorpusStatistics(sessions, a.options));
  const std::string text = FormatStatistics(stats);
  std::cout << text;
  if (!a.output.empty()) RETURN_IF_ERROR(WriteText(a.output, text));
  return absl::OkStatus();
}

// report ---------------------------------------------------------------

struct ReportArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string output;
  std::string series_dir;
};

absl::Status RunReport(const ReportArgs& a) {
  if (a.inputs.empty()) return absl::InvalidArgumentError("report needs input files");
  std::vector<std::pair<std::string, double>> speaker_rows;
  std::vector<std::pair<std::string, double>> response_rows;
  std::vector<Json> sweeps;
  for (const std::string& path : a.inputs) {
    ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
    ASSIGN_OR_RETURN(Json j, ParseJsonLine(absl::StrJoin(lines, "\n")));
    if (!j.is_object()) return absl::DataLossError(absl::StrCat(path, ": not an object"));
    ASSIGN_OR_RETURN(std::string kind, RequiredField<std::string>(j, "kind"));
    ASSIGN_OR_RETURN(std::string label, RequiredField<std::string>(j, "label"));
    if (kind == "speaker_id" || kind == "response_selection") {
      ASSIGN_OR_RETURN(double acc, RequiredField<double>(j, "accuracy"));
      (kind == "speaker_id" ? speaker_rows : response_rows).emplace_back(label, acc);
    } else if (kind == "alpha_sweep") {
      sweeps.push_back(std::move(j));
    } else {
      return absl::DataLossError(absl::StrCat(path, ": unknown report kind '", kind, "'"));
    }
  }
  std::string out;
  auto table = [&out](const std::string& title,
                      const std::vector<std::pair<std::string, double>>& rows) {
    if (rows.empty()) return;
    absl::StrAppend(&out, "## ", title, "\n\n| Method | Accuracy |\n|---|---:|\n");
    for (const auto& [label, acc] : rows)
      absl::StrAppend(&out, absl::StrFormat("| %s | %.2f |\n", label, 100.0 * acc));
    out += "\n";
  };
  table("Speaker identification", speaker_rows);
  table("Response selection", response_rows);
  for (size_t k = 0; k < sweeps.size(); ++k) {
    const Json& s = sweeps[k];
    const std::string label = s["label"].get<std::string>();
    absl::StrAppend(&out, "## Alpha sweep: ", label, "\n\n| alpha | Accuracy |\n|---:|---:|\n");
    std::string tsv = "alpha\taccuracy\n";
    if (!s.contains("points") || !s["points"].is_array()) {
      return absl::DataLossError(absl::StrCat("sweep '", label, "' has no points"));
    }
    for (const Json& p : s["points"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        return absl::DataLossError(absl::StrCat("sweep '", label, "': malformed point"));
      }
      const double alpha = p[0].get<double>();
      const double acc = p[1].get<double>();
      absl::StrAppend(&out, absl::StrFormat("| %.2f | %.2f |\n", alpha, 100.0 * acc));
      absl::StrAppend(&tsv, absl::StrFormat("%.6g\t%.6f\n", alpha, 100.0 * acc));
    }
    out += "\n";
    if (!a.series_dir.empty()) {
      const std::string path =
          (std::filesystem::path(a.series_dir) / absl::StrFormat("sweep_%02d.tsv", k))
              .string();
      RETURN_IF_ERROR(WriteText(path, tsv));
    }
  }
  std::cout << out;
  if (!a.output.empty()) RETURN_IF_ERROR(WriteText(a.output, out));
  return absl::OkStatus();
}

int Report(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  std::cerr << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kAlreadyExists:
      return kExitFile;
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kResourceExhausted:
    case absl::StatusCode::kAborted:
      return kExitData;
    case absl::StatusCode::kInvalidArgument:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

int RunCli(int argc, char** argv) {
  CLI::App app{"Multimodal multi-party speaker identification toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough(false);

  IngestArgs ingest;
  CLI::App* c_ingest = app.add_subcommand("ingest", "Validate and normalize a session file");
  AddCommon(c_ingest, ingest.common, false);
  c_ingest->add_option("--input", ingest.input, "Session file")->required();
  c_ingest->add_option("--output", ingest.output, "Normalized session file");
  c_ingest->add_option("--roster", ingest.roster, "Roster every name must belong to");
  c_ingest->add_option("--max-frame-gap", ingest.max_frame_gap, "Largest frame step in a track");
  c_ingest->add_option("--embedding-dim", ingest.embedding_dim, "Required embedding size");

  TracksArgs tracks;
  CLI::App* c_tracks = app.add_subcommand("tracks", "Link per-frame detections into face tracks");
  AddCommon(c_tracks, tracks.common, false);
  c_tracks->add_option("--detections", tracks.detections, "Detection file")->required();
  c_tracks->add_option("--output", tracks.output, "Track file")->required();
  c_tracks->add_option("--iou", tracks.link.iou_link_threshold, "IoU needed to link");
  c_tracks->add_option("--max-gap", tracks.link.max_gap, "Largest frame gap to bridge");
  c_tracks->add_option("--min-len", tracks.link.min_len, "Shortest track kept");

  LabelArgs label;
  CLI::App* c_label = app.add_subcommand("label", "Name face tracks from prototypes");
  AddCommon(c_label, label.common, false);
  c_label->add_option("--input", label.input, "Session or track file")->required();
  c_label->add_option("--format", label.format, "sessions or tracks")
      ->check(CLI::IsMember({"sessions", "tracks"}));
  c_label->add_option("--prototypes", label.prototypes, "Prototype table")->required();
  c_label->add_option("--output", label.output, "Labelled output")->required();
  c_label->add_option("--reference", label.reference, "Reference labels to validate against");
  c_label->add_option("--threshold", label.label.threshold, "Acceptance threshold t");
  c_label->add_option("--top-k", label.label.top_k, "Similarities averaged")
      ->check(CLI::PositiveNumber);
  c_label->add_option("--iou-match", label.iou_match, "IoU pairing auto and reference tracks");

  SessionsArgs sessions;
  CLI::App* c_sessions = app.add_subcommand("sessions", "Cut episodes into sliding-window sessions");
  AddCommon(c_sessions, sessions.common, false);
  c_sessions->add_option("--input", sessions.input, "Episode file (one episode per line)")->required();
  c_sessions->add_option("--roster", sessions.roster, "Main-character roster")->required();
  c_sessions->add_option("--output", sessions.output, "Session file")->required();
  c_sessions->add_option("--window-size", sessions.window.window_size, "Turns per session")
      ->check(CLI::PositiveNumber);
  c_sessions->add_option("--max-gap-seconds", sessions.window.max_gap_seconds,
                         "Adjacent turns must be closer than this");
  c_sessions->add_flag("--key-frames", sessions.key_frames,
                       "Fill missing key frames with the most-faces frame");

  NoisyArgs noisy;
  CLI::App* c_noisy = app.add_subcommand("noisy", "Remove a fraction of labelled tracks");
  AddCommon(c_noisy, noisy.common, true);
  c_noisy->add_option("--input", noisy.input, "Session file")->required();
  c_noisy->add_option("--output", noisy.output, "Noisy session file")->required();
  c_noisy->add_option("--noise-fraction", noisy.fraction, "Fraction removed per session")
      ->check(CLI::Range(0.0, 1.0));

  TrainArgs train;
  CLI::App* c_train = app.add_subcommand("train-head", "Train or apply the similarity head");
  AddCommon(c_train, train.common, true);
  c_train->add_option("--sessions", train.sessions, "Session file (speaker labels)")->required();
  c_train->add_option("--embeddings", train.embeddings, "Per-session embedding tables")->required();
  c_train->add_option("--params", train.params_in, "Existing parameters; skips training");
  c_train->add_option("--params-output", train.params_out, "Trained parameter file");
  c_train->add_option("--similarity-output", train.similarity_out, "Predicted p_sim tables");
  c_train->add_option("--loss-trace", train.loss_trace, "Per-epoch loss series");
  c_train->add_option("--hidden", train.train.hidden_dim, "Hidden units");
  c_train->add_option("--learning-rate", train.train.learning_rate, "Step size");
  c_train->add_option("--epochs", train.train.epochs, "Training epochs");
  c_train->add_option("--batch-size", train.train.batch_size, "Sessions per step");
  c_train->add_option("--optimizer", train.optimizer, "sgd or adam")
      ->check(CLI::IsMember({"sgd", "adam"}));
  c_train->add_option("--mse-weight", train.train.weights.mse, "Weight of the MSE term");
  c_train->add_option("--symmetry-weight", train.train.weights.symmetry,
                      "Weight of the symmetry term");

  SolveArgs solve;
  CLI::App* c_solve = app.add_subcommand("solve", "Identify the speaker of every turn");
  AddCommon(c_solve, solve.common, true);
  AddSolveInputs(c_solve, solve.inputs);
  c_solve->add_option("--alpha", solve.alpha, "Vision reward weight")->check(CLI::Range(0.0, 1.0));
  c_solve->add_option("--output", solve.output, "Per-session predictions");
  c_solve->add_option("--report", solve.report, "Accuracy report for `report`");
  c_solve->add_option("--label", solve.label, "Row label in reports");

  SweepArgs sweep;
  CLI::App* c_sweep = app.add_subcommand("sweep-alpha", "Accuracy as a function of alpha");
  AddCommon(c_sweep, sweep.common, true);
  AddSolveInputs(c_sweep, sweep.inputs);
  c_sweep->add_option("--grid", sweep.grid, "Comma-separated alpha values")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  c_sweep->add_option("--output", sweep.output, "Series file for `report`");
  c_sweep->add_option("--label", sweep.label, "Series label");

  RespondArgs respond;
  CLI::App* c_respond = app.add_subcommand(
      "respond-eval", "Build response-selection candidates or score them");
  AddCommon(c_respond, respond.common, true);
  c_respond->add_option("--sessions", respond.sessions, "Test session file");
  c_respond->add_option("--roster", respond.roster, "Roster for perturbations");
  c_respond->add_option("--mode", respond.mode, "none, random, random_history or shuffled")
      ->check(CLI::IsMember({"none", "random", "random_history", "shuffled"}));
  c_respond->add_option("--negatives", respond.negatives, "Negatives per item");
  c_respond->add_option("--candidates-output", respond.candidates_out, "Candidate file to write");
  c_respond->add_option("--perturbed-output", respond.perturbed_out, "Perturbed sessions");
  c_respond->add_option("--candidates", respond.candidates_in, "Candidate file to score");
  c_respond->add_option("--scores", respond.scores, "Per-candidate scores (lower is better)");
  c_respond->add_option("--report", respond.report, "Accuracy report for `report`");
  c_respond->add_option("--label", respond.label, "Row label in reports");

  SynthArgs synth;
  CLI::App* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  AddCommon(c_synth, synth.common, true);
  c_synth->add_option("--config", synth.config, "Generator config (JSON)");
  c_synth->add_option("--output-dir", synth.output_dir, "Output directory")->required();
  c_synth->add_option("--num-sessions", synth.num_sessions, "Overrides the config");
  c_synth->add_option("--window-size", synth.window_size, "Overrides the config");
  c_synth->add_option("--p-vision-correct", synth.p_vision_correct, "Overrides the config");
  c_synth->add_option("--p-face-present", synth.p_face_present, "Overrides the config");
  c_synth->add_option("--sim-noise", synth.sim_noise, "Overrides the config");

  StatsArgs stats;
  CLI::App* c_stats = app.add_subcommand("stats", "Corpus statistics");
  AddCommon(c_stats, stats.common, false);
  c_stats->add_option("--input", stats.input, "Session file")->required();
  c_stats->add_option("--output", stats.output, "Text file");
  c_stats->add_option("--fps", stats.options.frames_per_second, "Frames per second");

  ReportArgs report;
  CLI::App* c_report = app.add_subcommand("report", "Render accuracy tables and sweep series");
  AddCommon(c_report, report.common, false);
  c_report->add_option("inputs", report.inputs, "Report and series files");
  c_report->add_option("--output", report.output, "Markdown output");
  c_report->add_option("--series-dir", report.series_dir, "Directory for plottable series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  const Common* common = nullptr;
  for (const Common* c : {&ingest.common, &tracks.common, &label.common, &sessions.common,
                          &noisy.common, &train.common, &solve.common, &sweep.common,
                          &respond.common, &synth.common, &stats.common, &report.common}) {
    if (c->print_config) common = c;
  }
  if (common != nullptr) {
    std::cout << active->config_to_str(true, false);
    if (active == c_synth) {
      absl::StatusOr<SynthConfig> config = ResolveSynthConfig(synth);
      if (!config.ok()) return Report(config.status());
      std::cout << "# generator\n" << SerializeSynthConfig(*config) << "\n";
    }
    return kExitOk;
  }

  try {
    if (active == c_ingest) return Report(RunIngest(ingest));
    if (active == c_tracks) return Report(RunTracks(tracks));
    if (active == c_label) return Report(RunLabel(label));
    if (active == c_sessions) return Report(RunSessions(sessions));
    if (active == c_noisy) return Report(RunNoisy(noisy));
    if (active == c_train) return Report(RunTrainHead(train));
    if (active == c_solve) return Report(RunSolve(solve));
    if (active == c_sweep) return Report(RunSweep(sweep));
    if (active == c_respond) return Report(RunRespondEval(respond));
    if (active == c_synth) return Report(RunSynth(synth));
    if (active == c_stats) return Report(RunStats(stats));
    if (active == c_report) return Report(RunReport(report));
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mmspeaker::cli
