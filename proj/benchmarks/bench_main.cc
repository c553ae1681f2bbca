// benchmarks/bench_main.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scaling measurements for the lattice recursions, the exhaustive reference,
// decoding, and one training epoch.  Run with --benchmark_filter=... to pick
// a subset.

#include <benchmark/benchmark.h>

#include "translat/brute_force.h"
#include "translat/decode.h"
#include "translat/forward_backward.h"
#include "translat/model.h"
#include "translat/rng.h"
#include "translat/synthetic.h"
#include "translat/train.h"

namespace {

using namespace translat;

EmissionLattice bench_lattice(int T, int U) {
  std::mt19937_64 rng = make_rng(99, 0);
  return random_lattice(T, U, rng);
}

void BM_ForwardBackward(benchmark::State &state) {
  const int T = static_cast<int>(state.range(0));
  const int U = T / 3;
  const EmissionLattice lat = bench_lattice(T, U);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_backward(lat).log_likelihood);
  }
  state.SetComplexityN(T * (U + 1));
}

void BM_LossGradients(benchmark::State &state) {
  const int T = static_cast<int>(state.range(0));
  const int U = T / 3;
  const EmissionLattice lat = bench_lattice(T, U);
  const FBTables fb = forward_backward(lat);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_gradients(fb, lat).d_blank.data().data());
  }
  state.SetComplexityN(T * (U + 1));
}

void BM_EnumerateAlignments(benchmark::State &state) {
  const int T = static_cast<int>(state.range(0));
  const int U = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_alignments(T, U).size());
  }
}

std::vector<SyntheticUtterance> bench_corpus(int count) {
  CorpusConfig config;
  config.count = count;
  config.seed = 99;
  return generate_corpus(config);
}

void BM_GreedyDecode(benchmark::State &state) {
  const auto corpus = bench_corpus(8);
  const auto model = make_table_model(12, 4, 9);
  for (auto _ : state) {
    for (const auto &utt : corpus) {
      benchmark::DoNotOptimize(greedy_decode(*model, utt).tokens.size());
    }
  }
}

void BM_BeamDecode(benchmark::State &state) {
  const auto corpus = bench_corpus(4);
  const auto model = make_table_model(12, 4, 9);
  const int beam = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (const auto &utt : corpus) {
      benchmark::DoNotOptimize(beam_search(*model, utt, beam).size());
    }
  }
}

void BM_TrainEpochTable(benchmark::State &state) {
  const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
  TrainMethod method;
  method.kind = MethodKind::kMinLatency;
  method.lambda = 0.03;
  OptimizerConfig opt;
  opt.epochs = 1;
  for (auto _ : state) {
    auto model = make_table_model(12, 4, 9);
    benchmark::DoNotOptimize(
        train_run(model.get(), corpus, method, opt).rows.size());
  }
}

void BM_TrainEpochNetwork(benchmark::State &state) {
  const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
  TrainMethod method;
  OptimizerConfig opt;
  opt.epochs = 1;
  opt.learning_rate = 0.05;
  for (auto _ : state) {
    auto model = make_network_model(NetworkDims{}, 1);
    benchmark::DoNotOptimize(
        train_run(model.get(), corpus, method, opt).rows.size());
  }
}

BENCHMARK(BM_ForwardBackward)->RangeMultiplier(2)->Range(8, 256)->Complexity();
BENCHMARK(BM_LossGradients)->RangeMultiplier(2)->Range(8, 256)->Complexity();
BENCHMARK(BM_EnumerateAlignments)->DenseRange(6, 12, 2);
BENCHMARK(BM_GreedyDecode);
BENCHMARK(BM_BeamDecode)->Arg(1)->Arg(4)->Arg(10);
BENCHMARK(BM_TrainEpochTable)->Arg(8)->Arg(32);
BENCHMARK(BM_TrainEpochNetwork)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
