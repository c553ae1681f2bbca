// core/src/train.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "translat/decode.h"
#include "translat/errors.h"
#include "translat/latency.h"
#include "translat/restriction.h"

namespace translat {

MethodKind method_kind_from_name(const std::string &name) {
  if (name == "baseline") return MethodKind::kBaseline;
  if (name == "restricted") return MethodKind::kRestricted;
  if (name == "fastemit") return MethodKind::kFastEmit;
  if (name == "mlt") return MethodKind::kMinLatency;
  throw InvalidInputError("unknown training method '" + name + "'");
}

std::string method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kBaseline:
      return "baseline";
    case MethodKind::kRestricted:
      return "restricted";
    case MethodKind::kFastEmit:
      return "fastemit";
    case MethodKind::kMinLatency:
      return "mlt";
  }
  throw InvalidInputError("unknown training method enum value");
}

UtteranceGradients utterance_gradients(const Model &model,
                                       const SyntheticUtterance &utt,
                                       const TrainMethod &method) {
  const Emission em = emit_lattice(model, utt);
  const int T = utt.num_frames();
  const int U = utt.num_labels();

  UtteranceGradients out;
  FBTables fb;
  if (method.kind == MethodKind::kRestricted) {
    const MaskField masks = build_masks(utt.reference, method.left_buffer,
                                        method.right_buffer, T, U);
    LossResult r = masked_loss(em.lattice, masks);
    fb = std::move(r.fb);
    out.loss = r.loss;
    out.prob_grads = masked_loss_gradients(fb, em.lattice, masks);
  } else {
    LossResult r = transducer_loss(em.lattice);
    fb = std::move(r.fb);
    out.loss = r.loss;
    out.prob_grads = loss_gradients(fb, em.lattice);
  }

  // The expected delay per diagonal doubles as a trace diagnostic for every
  // method, so it is computed unconditionally.
  const DelayField delays =
      delay_matrix(diagonal_reference_times(utt.reference, T, U), T, U);
  const ExpectedDelays expected = expected_delays(fb, delays);
  out.mean_expected_delay = expected.mean();

  if (method.kind == MethodKind::kFastEmit) {
    out.prob_grads = fastemit_gradients(out.prob_grads, method.lambda);
  } else if (method.kind == MethodKind::kMinLatency) {
    out.prob_grads = min_latency_gradients(out.prob_grads, fb, delays,
                                           expected, method.lambda);
    out.loss = min_latency_loss(out.loss, expected, method.lambda);
  }

  const TokenGrid dz = logit_gradients(out.prob_grads, em.dist, utt.labels);
  out.param_grads.assign(model.params().size(), 0.0);
  model.backprop(utt, dz, &out.param_grads);
  return out;
}

TrainTrace train_run(Model *model, const std::vector<SyntheticUtterance> &corpus,
                     const TrainMethod &method, const OptimizerConfig &opt,
                     TrainTrace *partial) {
  if (corpus.empty()) throw InvalidInputError("train_run: empty corpus");
  if (opt.epochs < 1) throw InvalidInputError("train_run: need epochs >= 1");
  if (opt.learning_rate <= 0.0) {
    throw InvalidInputError("train_run: need a positive learning rate");
  }

  const std::size_t P = model->params().size();
  const double n = static_cast<double>(corpus.size());
  std::vector<double> grad(P, 0.0);
  std::vector<double> velocity(P, 0.0);

  TrainTrace trace;
  trace.rows.reserve(opt.epochs);
  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss_sum = 0.0;
    double delay_sum = 0.0;
    bool collapsed = false;
    // Fixed accumulation order: corpus order, one utterance at a time.
    for (const SyntheticUtterance &utt : corpus) {
      UtteranceGradients g;
      try {
        g = utterance_gradients(*model, utt, method);
      } catch (const DegenerateLatticeError &) {
        // Healthy softmax emissions normalize and are positive everywhere,
        // so a degenerate emission or lattice mid-run means the parameters
        // have numerically collapsed.
        collapsed = true;
        break;
      }
      loss_sum += g.loss;
      delay_sum += g.mean_expected_delay;
      for (std::size_t i = 0; i < P; ++i) grad[i] += g.param_grads[i];
    }
    const double mean_loss = collapsed ? std::nan("") : loss_sum / n;
    if (!std::isfinite(mean_loss)) {
      TraceRow row;
      row.epoch = epoch;
      row.mean_loss = mean_loss;
      row.mean_expected_delay = delay_sum / n;
      row.token_error_rate = std::nan("");
      row.mean_delay_frames = std::nan("");
      trace.rows.push_back(row);
      if (partial != nullptr) *partial = trace;
      std::ostringstream msg;
      msg << "train_run: diverged at epoch " << epoch
          << " (mean loss is not finite)";
      throw DivergenceError(msg.str(), epoch);
    }

    std::vector<double> &params = model->params();
    for (std::size_t i = 0; i < P; ++i) {
      velocity[i] = opt.momentum * velocity[i] + grad[i] / n;
      params[i] -= opt.learning_rate * velocity[i];
    }

    std::vector<DecodeResult> decodes;
    decodes.reserve(corpus.size());
    for (const SyntheticUtterance &utt : corpus) {
      decodes.push_back(greedy_decode(*model, utt));
    }

    TraceRow row;
    row.epoch = epoch;
    row.mean_loss = mean_loss;
    row.mean_expected_delay = delay_sum / n;
    row.token_error_rate = token_error_rate(decodes, corpus);
    row.mean_delay_frames = mean_signed_token_delay(decodes, corpus);
    trace.rows.push_back(row);
  }
  return trace;
}

std::string trace_to_csv(const TrainTrace &trace) {
  std::ostringstream out;
  out << "# schema: translat.trace.v1\n";
  out << "epoch,mean_loss,mean_expected_delay,token_error_rate,mean_delay_frames\n";
  char buf[160];
  for (const TraceRow &r : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g\n", r.epoch,
                  r.mean_loss, r.mean_expected_delay, r.token_error_rate,
                  r.mean_delay_frames);
    out << buf;
  }
  return out.str();
}

}  // namespace translat
