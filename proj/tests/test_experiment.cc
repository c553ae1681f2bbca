// tests/test_experiment.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/experiment.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "translat/errors.h"
#include "translat/model.h"
#include "translat/synthetic.h"
#include "translat/train.h"

using namespace translat;

namespace {

// Small enough to train in milliseconds, large enough that the corpus has
// distinct utterances and a nonempty decode.
RunConfig small_config() {
  RunConfig c;
  c.name = "unit";
  c.corpus.t_min = 5;
  c.corpus.t_max = 6;
  c.corpus.u_min = 1;
  c.corpus.u_max = 2;
  c.corpus.vocab = 4;
  c.corpus.count = 3;
  c.model.kind = "table";
  c.optimizer.learning_rate = 0.5;
  c.optimizer.epochs = 8;
  c.seeds = {1};
  return c;
}

bool same_number(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b;
}

std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string &tag) {
  const auto dir =
      std::filesystem::temp_directory_path() / ("translat_exp_" + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

int count_lines(const std::string &text) {
  int n = 0;
  for (char ch : text) {
    if (ch == '\n') ++n;
  }
  return n;
}

int count_occurrences(const std::string &text, const std::string &needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("run config survives the json round trip") {
  RunConfig c;
  c.name = "sweep-a";
  c.corpus_path = "corpus.jsonl";
  c.corpus.t_min = 4;
  c.corpus.t_max = 9;
  c.corpus.u_min = 1;
  c.corpus.u_max = 2;
  c.corpus.vocab = 5;
  c.corpus.noise = 0.05;
  c.corpus.silence_frames = 1;
  c.corpus.count = 11;
  c.corpus.seed = 42;
  c.model.kind = "network";
  c.model.d_encoder = 8;
  c.model.d_predictor = 7;
  c.model.d_joint = 6;
  c.method.kind = MethodKind::kRestricted;
  c.method.left_buffer = 3;
  c.method.right_buffer = 4;
  c.method.lambda = 0.25;
  c.optimizer.learning_rate = 0.1;
  c.optimizer.momentum = 0.9;
  c.optimizer.epochs = 17;
  c.frame_period_ms = 30.0;
  c.seeds = {4, 5, 6};

  const RunConfig r = run_config_from_json(run_config_to_json(c));
  CHECK(r.name == c.name);
  CHECK(r.corpus_path == c.corpus_path);
  CHECK(r.corpus.t_min == c.corpus.t_min);
  CHECK(r.corpus.t_max == c.corpus.t_max);
  CHECK(r.corpus.u_min == c.corpus.u_min);
  CHECK(r.corpus.u_max == c.corpus.u_max);
  CHECK(r.corpus.vocab == c.corpus.vocab);
  CHECK(r.corpus.noise == c.corpus.noise);
  CHECK(r.corpus.silence_frames == c.corpus.silence_frames);
  CHECK(r.corpus.count == c.corpus.count);
  CHECK(r.corpus.seed == c.corpus.seed);
  CHECK(r.model.kind == c.model.kind);
  CHECK(r.model.d_encoder == c.model.d_encoder);
  CHECK(r.model.d_predictor == c.model.d_predictor);
  CHECK(r.model.d_joint == c.model.d_joint);
  CHECK(r.method.kind == c.method.kind);
  CHECK(r.method.left_buffer == c.method.left_buffer);
  CHECK(r.method.right_buffer == c.method.right_buffer);
  CHECK(r.method.lambda == c.method.lambda);
  CHECK(r.optimizer.learning_rate == c.optimizer.learning_rate);
  CHECK(r.optimizer.momentum == c.optimizer.momentum);
  CHECK(r.optimizer.epochs == c.optimizer.epochs);
  CHECK(r.frame_period_ms == c.frame_period_ms);
  CHECK(r.seeds == c.seeds);
}

TEST_CASE("run config parsing rejects broken input") {
  CHECK_THROWS_AS(run_config_from_json("not json"), InvalidInputError);
  CHECK_THROWS_AS(run_config_from_json(R"({"model":{"kind":"tabular"}})"),
                  InvalidInputError);
  CHECK_THROWS_AS(run_config_from_json(R"({"seeds":[]})"), InvalidInputError);
  CHECK_THROWS_AS(run_config_from_json(R"({"method":{"name":"adaptive"}})"),
                  InvalidInputError);
}

TEST_CASE("training runs are a pure function of config and seed") {
  const RunConfig c = small_config();
  const RunOutcome a = run_training(c, 1);
  const RunOutcome b = run_training(c, 1);

  REQUIRE(a.trace.rows.size() == 8);
  CHECK(a.decodes.size() == 3);
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(a.model->to_json() == b.model->to_json());
  CHECK(same_number(a.final_ter, b.final_ter));
  CHECK(same_number(a.final_mean_delay_frames, b.final_mean_delay_frames));
  CHECK(same_number(a.final_mean_expected_delay, b.final_mean_expected_delay));

  // A different seed draws a different corpus, so the trace moves too.
  const RunOutcome d = run_training(c, 2);
  CHECK(trace_to_csv(d.trace) != trace_to_csv(a.trace));
}

TEST_CASE("training can load the corpus from a file") {
  CorpusConfig cc;
  cc.t_min = 5;
  cc.t_max = 6;
  cc.u_min = 1;
  cc.u_max = 2;
  cc.vocab = 4;
  cc.count = 2;
  cc.seed = 9;
  const std::vector<SyntheticUtterance> corpus = generate_corpus(cc);

  const auto dir = fresh_dir("corpus");
  std::filesystem::create_directories(dir);
  const auto path = dir / "corpus.jsonl";
  save_corpus(path.string(), corpus);

  RunConfig c = small_config();
  c.corpus_path = path.string();
  const RunOutcome out = run_training(c, 1);
  CHECK(out.trace.rows.size() == 8);
  CHECK(out.decodes.size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run artifacts land in the output directory") {
  const RunConfig c = small_config();
  const RunOutcome out = run_training(c, c.seeds.front());

  const auto dir = fresh_dir("artifacts");
  write_run_artifacts(dir.string(), c, out);

  CHECK(std::filesystem::exists(dir / "config.json"));
  CHECK(std::filesystem::exists(dir / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "checkpoint.json"));
  CHECK(std::filesystem::exists(dir / "decode.jsonl"));
  CHECK(std::filesystem::exists(dir / "latency.json"));

  const std::string trace = slurp(dir / "trace.csv");
  CHECK(trace.rfind("# schema: translat.trace.v1\n", 0) == 0);
  CHECK(count_lines(trace) == 2 + 8);

  const RunConfig back = run_config_from_json(slurp(dir / "config.json"));
  CHECK(back.name == "unit");
  CHECK(back.model.kind == "table");
  CHECK(back.seeds == c.seeds);

  const std::unique_ptr<Model> restored =
      load_model((dir / "checkpoint.json").string());
  CHECK(restored->params() == out.model->params());

  CHECK(count_lines(slurp(dir / "decode.jsonl")) == 3);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "latency.json"));
  CHECK(report.contains("pr50_ms"));
  CHECK(report.contains("final_token_error_rate"));
  CHECK(report.at("per_utterance").size() == 3);

  RunConfig bad = c;
  bad.seeds.clear();
  const RunOutcome empty;
  CHECK_THROWS_AS(write_run_artifacts((dir / "bad").string(), bad, empty),
                  InvalidInputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("zero weight sweep points match the baseline") {
  RunConfig base = small_config();
  base.seeds = {1, 2};
  base.optimizer.epochs = 5;
  const std::vector<SweepPoint> grid = {{MethodKind::kBaseline, 0.0},
                                        {MethodKind::kFastEmit, 0.0},
                                        {MethodKind::kMinLatency, 0.0}};
  std::vector<std::string> failures;
  const std::vector<SweepRow> rows = run_sweep(base, grid, &failures);
  CHECK(failures.empty());
  REQUIRE(rows.size() == 6);

  for (int s = 0; s < 2; ++s) {
    const SweepRow &plain = rows[s];
    const SweepRow &fe = rows[2 + s];
    const SweepRow &ml = rows[4 + s];
    CHECK(plain.method == "baseline");
    CHECK(fe.method == "fastemit");
    CHECK(ml.method == "mlt");
    CHECK(plain.seed == static_cast<std::uint64_t>(s + 1));
    for (const SweepRow *other : {&fe, &ml}) {
      CHECK(same_number(other->ter, plain.ter));
      CHECK(same_number(other->pr50_ms, plain.pr50_ms));
      CHECK(same_number(other->pr90_ms, plain.pr90_ms));
      CHECK(same_number(other->mean_expected_delay, plain.mean_expected_delay));
      CHECK(same_number(other->mean_delay_frames, plain.mean_delay_frames));
    }
  }

  const std::string csv = sweep_to_csv(rows);
  CHECK(csv.rfind("# schema: translat.sweep.v1\n"
                  "method,param,seed,ter,pr50_ms,pr90_ms,mean_expected_delay,"
                  "mean_delay_frames\n",
                  0) == 0);
  CHECK(count_lines(csv) == 2 + 6);
  CHECK(csv.find("\nbaseline,0,1,") != std::string::npos);

  const std::string summary = sweep_summary_to_csv(rows);
  CHECK(summary.rfind("# schema: translat.sweep_summary.v1\n", 0) == 0);
  // One aggregated row per grid point, each averaging both seeds.
  CHECK(count_occurrences(summary, ",nan,synthetic\n") == 3);
  CHECK(summary.find("\nbaseline,0,2,") != std::string::npos);
}

TEST_CASE("sweep summary keeps the published reference rows apart") {
  // The reference figures come from a fixed external benchmark and must show
  // up verbatim even when there are no synthetic rows to aggregate.
  const std::string summary = sweep_summary_to_csv({});
  CHECK(summary.rfind("# schema: translat.sweep_summary.v1\n", 0) == 0);
  CHECK(count_lines(summary) == 2 + 4);
  CHECK(count_occurrences(summary, "published_reference(not_reproduced)") == 4);
  CHECK(summary.find("baseline,nan,0,nan,143,220,nan,nan,12.1,"
                     "published_reference(not_reproduced)\n") !=
        std::string::npos);
  CHECK(summary.find("restricted,nan,0,nan,33,110,nan,nan,12.6,"
                     "published_reference(not_reproduced)\n") !=
        std::string::npos);
  CHECK(summary.find("fastemit,nan,0,nan,-50,67,nan,nan,12.7,"
                     "published_reference(not_reproduced)\n") !=
        std::string::npos);
  CHECK(summary.find("mlt,nan,0,nan,-53,27,nan,nan,12.8,"
                     "published_reference(not_reproduced)\n") !=
        std::string::npos);
}

TEST_CASE("infeasible sweep points are recorded and skipped") {
  RunConfig base = small_config();
  // Every synthetic utterance ends with at least two label-free frames, so a
  // zero right buffer can never cover the final stretch.
  const std::vector<SweepPoint> grid = {{MethodKind::kRestricted, 0.0}};
  std::vector<std::string> failures;
  const std::vector<SweepRow> rows = run_sweep(base, grid, &failures);
  CHECK(rows.empty());
  REQUIRE(failures.size() == 1);
  CHECK(failures[0].rfind("restricted param=0 seed=1:", 0) == 0);

  CHECK_THROWS_AS(run_sweep(base, {}, nullptr), InvalidInputError);
}
