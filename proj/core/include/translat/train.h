// core/include/translat/train.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_TRAIN_H_
#define TRANSLAT_TRAIN_H_

#include <string>
#include <vector>

#include "translat/forward_backward.h"
#include "translat/model.h"
#include "translat/synthetic.h"

namespace translat {

enum class MethodKind { kBaseline, kRestricted, kFastEmit, kMinLatency };

struct TrainMethod {
  MethodKind kind = MethodKind::kBaseline;
  int left_buffer = 20;   // restricted
  int right_buffer = 9;   // restricted
  double lambda = 0.0;    // fastemit / mlt weight
};

MethodKind method_kind_from_name(const std::string &name);
std::string method_name(MethodKind kind);

struct OptimizerConfig {
  double learning_rate = 0.5;
  double momentum = 0.0;
  int epochs = 200;
};

/* One trace row per epoch.  Loss and mean expected delay are measured during
 * the gradient pass (before the update); token error rate and mean signed
 * greedy emission delay are measured by decoding after the update.  The
 * delay column averages position-matched tokens and is NaN until the model
 * emits at least one token.
 */
struct TraceRow {
  int epoch = 0;
  double mean_loss = 0.0;
  double mean_expected_delay = 0.0;
  double token_error_rate = 0.0;
  double mean_delay_frames = 0.0;
};

struct TrainTrace {
  std::vector<TraceRow> rows;
};

// CSV with a schema line, then a header, then one row per epoch.
std::string trace_to_csv(const TrainTrace &trace);

/* Full-batch gradient descent.  Utterances are visited in corpus order and
 * gradients accumulate into one flat vector, so a run is a pure function of
 * (initial parameters, corpus, method, optimizer).  Raises DivergenceError
 * naming the first epoch whose mean loss is not finite; an utterance whose
 * emissions collapse to a degenerate lattice counts as such an epoch.  When
 * partial is given it then holds every completed row plus the divergent
 * one, so callers can keep the trace.
 */
TrainTrace train_run(Model *model, const std::vector<SyntheticUtterance> &corpus,
                     const TrainMethod &method, const OptimizerConfig &opt,
                     TrainTrace *partial = nullptr);

// Gradient pass of a single utterance, exposed for equivalence and
// difference tests: the method's probability-space gradient field, the
// resulting parameter gradient, the loss and the mean expected delay.
struct UtteranceGradients {
  double loss = 0.0;
  double mean_expected_delay = 0.0;
  GradientField prob_grads;
  std::vector<double> param_grads;
};
UtteranceGradients utterance_gradients(const Model &model,
                                       const SyntheticUtterance &utt,
                                       const TrainMethod &method);

}  // namespace translat

#endif  // TRANSLAT_TRAIN_H_
