// tools/main.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  Subcommands: verify, gen-corpus, train, decode,
// sweep.  Exit codes: 0 success, 1 verification or run failure, 2 invalid
// configuration.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "translat/decode.h"
#include "translat/errors.h"
#include "translat/experiment.h"
#include "translat/model.h"
#include "translat/synthetic.h"
#include "translat/train.h"
#include "translat/verify.h"

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw translat::Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw translat::Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw translat::Error("short write to '" + path + "'");
}

// "mlt:0,0.03,0.1,0.3" -> four points; "baseline" -> one point with param 0.
std::vector<translat::SweepPoint> parse_grid_entry(const std::string &entry) {
  const std::size_t colon = entry.find(':');
  const translat::MethodKind kind =
      translat::method_kind_from_name(entry.substr(0, colon));
  std::vector<translat::SweepPoint> points;
  if (colon == std::string::npos) {
    points.push_back({kind, 0.0});
    return points;
  }
  std::stringstream rest(entry.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      points.push_back({kind, v});
    } catch (const std::exception &) {
      throw translat::InvalidInputError("bad grid value '" + item + "' in '" +
                                        entry + "'");
    }
  }
  if (points.empty()) {
    throw translat::InvalidInputError("grid entry '" + entry +
                                      "' names no parameter values");
  }
  return points;
}

struct VerifyArgs {
  translat::VerifyOptions options;
};

int cmd_verify(const VerifyArgs &args) {
  const translat::VerifyReport report = translat::run_verification(args.options);
  std::cout << translat::format_report(report);
  return report.ok() ? 0 : 1;
}

struct GenCorpusArgs {
  translat::CorpusConfig config;
  std::string out;
};

int cmd_gen_corpus(const GenCorpusArgs &args) {
  const auto corpus = translat::generate_corpus(args.config);
  translat::save_corpus(args.out, corpus);
  std::cout << "wrote " << corpus.size() << " utterances to " << args.out
            << "\n";
  return 0;
}

struct TrainArgs {
  std::string config_path;
  std::string corpus_path;
  std::string name;
  std::string method;
  double lambda_mlt = 0.0;
  double lambda_fe = 0.0;
  int b_left = 0;
  int b_right = 0;
  int corpus_count = 0;
  double learning_rate = 0.0;
  double momentum = 0.0;
  int epochs = 0;
  std::uint64_t seed = 1;
  double frame_period_ms = 0.0;
  std::string out;

  CLI::Option *seed_opt = nullptr;
  CLI::Option *lambda_mlt_opt = nullptr;
  CLI::Option *lambda_fe_opt = nullptr;
};

// Builds the effective RunConfig: file config first, then flag overrides.
translat::RunConfig train_config(const TrainArgs &args, const CLI::App *cmd) {
  translat::RunConfig config;
  if (!args.config_path.empty()) {
    config = translat::run_config_from_json(read_file(args.config_path));
  }
  if (cmd->count("--corpus") > 0) config.corpus_path = args.corpus_path;
  if (cmd->count("--name") > 0) config.name = args.name;
  if (cmd->count("--method") > 0) {
    config.method.kind = translat::method_kind_from_name(args.method);
  }
  if (args.lambda_mlt_opt->count() > 0) {
    if (config.method.kind != translat::MethodKind::kMinLatency) {
      throw translat::InvalidInputError(
          "--lambda-mlt requires --method mlt");
    }
    config.method.lambda = args.lambda_mlt;
  }
  if (args.lambda_fe_opt->count() > 0) {
    if (config.method.kind != translat::MethodKind::kFastEmit) {
      throw translat::InvalidInputError(
          "--lambda-fe requires --method fastemit");
    }
    config.method.lambda = args.lambda_fe;
  }
  if (cmd->count("--b-left") > 0) config.method.left_buffer = args.b_left;
  if (cmd->count("--b-right") > 0) config.method.right_buffer = args.b_right;
  if (cmd->count("--corpus-count") > 0) config.corpus.count = args.corpus_count;
  if (cmd->count("--lr") > 0) config.optimizer.learning_rate = args.learning_rate;
  if (cmd->count("--momentum") > 0) config.optimizer.momentum = args.momentum;
  if (cmd->count("--epochs") > 0) config.optimizer.epochs = args.epochs;
  if (cmd->count("--frame-period-ms") > 0) {
    config.frame_period_ms = args.frame_period_ms;
  }
  if (args.seed_opt->count() > 0) {
    config.seeds = {args.seed};
  } else if (config.seeds.size() != 1) {
    throw translat::InvalidInputError(
        "train runs exactly one seed; pass --seed or a single-seed config");
  }
  return config;
}

int cmd_train(const TrainArgs &args, const CLI::App *cmd) {
  const translat::RunConfig config = train_config(args, cmd);
  translat::TrainTrace partial;
  translat::RunOutcome outcome;
  try {
    outcome = translat::run_training(config, config.seeds.front(), &partial);
  } catch (const translat::DivergenceError &e) {
    // Keep what the run produced so the failure can be inspected.
    std::filesystem::create_directories(args.out);
    write_file(args.out + "/config.json", translat::run_config_to_json(config));
    write_file(args.out + "/trace.csv", translat::trace_to_csv(partial));
    std::cerr << "error: " << e.what() << "\n"
              << "trace retained at " << args.out << "/trace.csv\n";
    return 1;
  }
  translat::write_run_artifacts(args.out, config, outcome);
  std::cout << "wrote " << args.out << ": epochs=" << outcome.trace.rows.size()
            << " final_ter=" << outcome.final_ter
            << " pr50_ms=" << outcome.latency.pr50_ms
            << " pr90_ms=" << outcome.latency.pr90_ms
            << " mean_delay_frames=" << outcome.final_mean_delay_frames << "\n";
  return 0;
}

struct DecodeArgs {
  std::string checkpoint;
  std::string corpus_path;
  int beam = 0;  // 0 = greedy
  double frame_period_ms = 60.0;
  std::string out;
};

int cmd_decode(const DecodeArgs &args) {
  const auto model = translat::load_model(args.checkpoint);
  const auto corpus = translat::load_corpus(args.corpus_path);
  std::vector<translat::DecodeResult> results;
  results.reserve(corpus.size());
  for (const auto &utt : corpus) {
    if (args.beam <= 0) {
      results.push_back(translat::greedy_decode(*model, utt));
    } else {
      const auto hyps = translat::beam_search(*model, utt, args.beam);
      results.push_back({hyps.front().tokens, hyps.front().emission_frames});
    }
  }
  const translat::LatencyReport latency =
      translat::pr_latency(results, corpus, args.frame_period_ms);
  const double ter = translat::token_error_rate(results, corpus);

  std::filesystem::create_directories(args.out);
  write_file(args.out + "/decode.jsonl",
             translat::decode_results_to_jsonl(results, corpus,
                                               args.frame_period_ms));
  write_file(args.out + "/latency.json",
             translat::latency_report_to_json(latency, ter));
  std::cout << "decoded " << corpus.size() << " utterances: ter=" << ter
            << " pr50_ms=" << latency.pr50_ms << " pr90_ms=" << latency.pr90_ms
            << " empty=" << latency.empty_hypotheses << "\n";
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::vector<std::string> grid_entries;
  std::vector<std::uint64_t> seeds;
  int corpus_count = 0;
  double learning_rate = 0.0;
  double momentum = 0.0;
  int epochs = 0;
  double frame_period_ms = 0.0;
  std::string out;
};

int cmd_sweep(const SweepArgs &args, const CLI::App *cmd) {
  translat::RunConfig base;
  if (!args.config_path.empty()) {
    base = translat::run_config_from_json(read_file(args.config_path));
  }
  if (cmd->count("--seeds") > 0) base.seeds = args.seeds;
  if (cmd->count("--corpus-count") > 0) base.corpus.count = args.corpus_count;
  if (cmd->count("--lr") > 0) base.optimizer.learning_rate = args.learning_rate;
  if (cmd->count("--momentum") > 0) base.optimizer.momentum = args.momentum;
  if (cmd->count("--epochs") > 0) base.optimizer.epochs = args.epochs;
  if (cmd->count("--frame-period-ms") > 0) {
    base.frame_period_ms = args.frame_period_ms;
  }

  std::vector<translat::SweepPoint> grid;
  for (const std::string &entry : args.grid_entries) {
    for (const translat::SweepPoint &p : parse_grid_entry(entry)) {
      grid.push_back(p);
    }
  }

  std::vector<std::string> failures;
  const std::vector<translat::SweepRow> rows =
      translat::run_sweep(base, grid, &failures);
  for (const std::string &f : failures) std::cerr << "skipped: " << f << "\n";
  if (rows.empty()) {
    std::cerr << "error: all " << grid.size() * base.seeds.size()
              << " sweep runs failed\n";
    return 1;
  }

  std::filesystem::create_directories(args.out);
  write_file(args.out + "/sweep.csv", translat::sweep_to_csv(rows));
  write_file(args.out + "/sweep_summary.csv",
             translat::sweep_summary_to_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << args.out
            << "/sweep.csv (+ sweep_summary.csv)\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{
      "transducer lattice training and latency measurement tool"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  CLI::App *verify = app.add_subcommand(
      "verify", "run the self-check suites against exhaustive references");
  verify->add_option("--max-T", verify_args.options.max_t,
                     "largest frame count in the random instance set");
  verify->add_option("--max-U", verify_args.options.max_u,
                     "largest label count in the random instance set");
  verify->add_option("--cases", verify_args.options.cases,
                     "lattices per equivalence/identity check");
  verify->add_option("--grad-cases", verify_args.options.grad_cases,
                     "lattices per finite-difference check");
  verify->add_option("--seed", verify_args.options.seed, "instance stream seed");
  verify->add_option("--replay", verify_args.options.replay_path,
                     "write the first failing lattice to this path");
  verify
      ->add_flag("--perturb-beta", verify_args.options.perturb_beta,
                 "corrupt one backward entry (negative control; must fail)")
      ->group("testing");

  GenCorpusArgs gen_args;
  CLI::App *gen = app.add_subcommand("gen-corpus",
                                     "write a synthetic corpus as JSON lines");
  gen->add_option("--t-min", gen_args.config.t_min, "fewest frames");
  gen->add_option("--t-max", gen_args.config.t_max, "most frames");
  gen->add_option("--u-min", gen_args.config.u_min, "fewest labels");
  gen->add_option("--u-max", gen_args.config.u_max, "most labels");
  gen->add_option("--vocab", gen_args.config.vocab, "token count without blank");
  gen->add_option("--noise", gen_args.config.noise, "feature noise amplitude");
  gen->add_option("--silence-frames", gen_args.config.silence_frames,
                  "trailing silence frames per utterance");
  gen->add_option("--count", gen_args.config.count, "utterance count");
  gen->add_option("--seed", gen_args.config.seed, "corpus stream seed");
  gen->add_option("--out", gen_args.out, "output path")->required();

  TrainArgs train_args;
  CLI::App *train = app.add_subcommand("train", "train one model, one seed");
  train->add_option("--config", train_args.config_path,
                    "run config JSON (flags override it)");
  train->add_option("--corpus", train_args.corpus_path,
                    "corpus path (default: generate from the seed)");
  train->add_option("--name", train_args.name, "experiment name");
  train->add_option("--method", train_args.method,
                    "baseline | restricted | fastemit | mlt");
  train_args.lambda_mlt_opt = train->add_option(
      "--lambda-mlt", train_args.lambda_mlt, "delay regularizer weight");
  train_args.lambda_fe_opt = train->add_option(
      "--lambda-fe", train_args.lambda_fe, "label-gradient boost weight");
  train->add_option("--b-left", train_args.b_left,
                    "alignment buffer to the left, frames");
  train->add_option("--b-right", train_args.b_right,
                    "alignment buffer to the right, frames");
  train->add_option("--corpus-count", train_args.corpus_count,
                    "generated corpus size");
  train->add_option("--lr", train_args.learning_rate, "learning rate");
  train->add_option("--momentum", train_args.momentum, "momentum coefficient");
  train->add_option("--epochs", train_args.epochs, "training epochs");
  train_args.seed_opt =
      train->add_option("--seed", train_args.seed, "run seed (exactly one)");
  train->add_option("--frame-period-ms", train_args.frame_period_ms,
                    "milliseconds per frame in latency reports");
  train->add_option("--out", train_args.out, "artifact directory")->required();

  DecodeArgs decode_args;
  CLI::App *decode = app.add_subcommand(
      "decode", "decode a corpus with a trained checkpoint");
  decode->add_option("--checkpoint", decode_args.checkpoint, "model JSON")
      ->required();
  decode->add_option("--corpus", decode_args.corpus_path, "corpus path")
      ->required();
  decode->add_option("--beam", decode_args.beam,
                     "beam width; 0 means greedy (beam 1 still sums paths)");
  decode->add_option("--frame-period-ms", decode_args.frame_period_ms,
                     "milliseconds per frame in latency reports");
  decode->add_option("--out", decode_args.out, "artifact directory")->required();

  SweepArgs sweep_args;
  CLI::App *sweep = app.add_subcommand(
      "sweep", "train a method/parameter grid and tabulate the trade-off");
  sweep->add_option("--config", sweep_args.config_path,
                    "base run config JSON (flags override it)");
  sweep->add_option("--grid", sweep_args.grid_entries,
                    "grid entry, e.g. mlt:0,0.03,0.1,0.3 or baseline "
                    "(repeatable)")
      ->required();
  sweep->add_option("--seeds", sweep_args.seeds, "seeds averaged per point");
  sweep->add_option("--corpus-count", sweep_args.corpus_count,
                    "generated corpus size");
  sweep->add_option("--lr", sweep_args.learning_rate, "learning rate");
  sweep->add_option("--momentum", sweep_args.momentum, "momentum coefficient");
  sweep->add_option("--epochs", sweep_args.epochs, "training epochs");
  sweep->add_option("--frame-period-ms", sweep_args.frame_period_ms,
                    "milliseconds per frame in latency reports");
  sweep->add_option("--out", sweep_args.out, "artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(verify_args);
    if (app.got_subcommand(gen)) return cmd_gen_corpus(gen_args);
    if (app.got_subcommand(train)) return cmd_train(train_args, train);
    if (app.got_subcommand(decode)) return cmd_decode(decode_args);
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_args, sweep);
  } catch (const translat::InvalidInputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
