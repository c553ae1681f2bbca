// core/include/translat/experiment.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Run orchestration shared by the command-line tool and the acceptance
// suite: config (de)serialization, single training runs, parameter sweeps
// and their CSV reports.

#ifndef TRANSLAT_EXPERIMENT_H_
#define TRANSLAT_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "translat/decode.h"
#include "translat/model.h"
#include "translat/synthetic.h"
#include "translat/train.h"

namespace translat {

struct ModelConfig {
  std::string kind = "table";  // "table" | "network"
  int d_encoder = 16;
  int d_predictor = 16;
  int d_joint = 16;
};

/* Everything a run needs.  corpus_path, when non-empty, wins over the
 * inline corpus config.  The run seed derives both the corpus stream (when
 * generating) and the model-init stream, so one seed pins the whole run.
 */
struct RunConfig {
  std::string name = "run";
  std::string corpus_path;
  CorpusConfig corpus;
  ModelConfig model;
  TrainMethod method;
  OptimizerConfig optimizer;
  double frame_period_ms = 60.0;
  std::vector<std::uint64_t> seeds = {1};
};

std::string run_config_to_json(const RunConfig &config);
RunConfig run_config_from_json(const std::string &text);

struct RunOutcome {
  TrainTrace trace;
  std::unique_ptr<Model> model;
  std::vector<DecodeResult> decodes;  // greedy, on the training corpus
  LatencyReport latency;
  double final_ter = 0.0;
  double final_mean_delay_frames = 0.0;
  double final_mean_expected_delay = 0.0;
};

// Trains one seed of the config and greedy-decodes the training corpus.
// When partial is given it holds the trace rows accumulated before a
// DivergenceError, so a failed run still leaves its trace behind.
RunOutcome run_training(const RunConfig &config, std::uint64_t seed,
                        TrainTrace *partial = nullptr);

// config.json, trace.csv, checkpoint.json, decode.jsonl, latency.json.
void write_run_artifacts(const std::string &dir, const RunConfig &config,
                         const RunOutcome &outcome);

// One grid entry: a method plus its swept parameter (lambda for fastemit
// and mlt, right_buffer for restricted, ignored for baseline).
struct SweepPoint {
  MethodKind method = MethodKind::kBaseline;
  double param = 0.0;
};

struct SweepRow {
  std::string method;
  double param = 0.0;
  std::uint64_t seed = 0;
  double ter = 0.0;
  double pr50_ms = 0.0;
  double pr90_ms = 0.0;
  double mean_expected_delay = 0.0;
  double mean_delay_frames = 0.0;
};

// Trains every (point, seed) pair of the grid.  Rows come back in grid
// order, seeds innermost.  A run that raises is skipped; when failures is
// given, one "method param=.. seed=..: reason" line is recorded per skip.
std::vector<SweepRow> run_sweep(const RunConfig &base,
                                const std::vector<SweepPoint> &grid,
                                std::vector<std::string> *failures = nullptr);

// Per-run rows.
std::string sweep_to_csv(const std::vector<SweepRow> &rows);

/* Seed-averaged summary, one row per grid point, plus fixed reference rows.
 * The reference rows quote published word-error/latency figures for the
 * four methods on a conventional large-vocabulary setup; they are labeled
 * origin=published_reference(not_reproduced) and exist only as context for
 * the synthetic numbers.
 */
std::string sweep_summary_to_csv(const std::vector<SweepRow> &rows);

}  // namespace translat

#endif  // TRANSLAT_EXPERIMENT_H_
