// core/src/latency.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/latency.h"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/log_math.h"

namespace translat {

using nlohmann::json;

double ExpectedDelays::mean() const {
  if (per_diagonal.empty()) return 0.0;
  double s = 0.0;
  for (double x : per_diagonal) s += x;
  return s / static_cast<double>(per_diagonal.size());
}

ReferenceAlignment reference_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInputError(std::string("reference: unparseable JSON: ") +
                            e.what());
  }
  if (!j.is_object() || !j.contains("label_times") || !j.contains("eos_frame")) {
    throw InvalidInputError(
        "reference: expected object with label_times and eos_frame");
  }
  if (!j["label_times"].is_array() || !j["eos_frame"].is_number_integer()) {
    throw InvalidInputError("reference: malformed label_times or eos_frame");
  }
  ReferenceAlignment ref;
  for (const auto &v : j["label_times"]) {
    if (!v.is_number_integer()) {
      throw InvalidInputError("reference: label_times must be integers");
    }
    ref.label_times.push_back(v.get<int>());
  }
  ref.eos_frame = j["eos_frame"].get<int>();
  return ref;
}

std::string reference_to_json(const ReferenceAlignment &ref) {
  json j{{"label_times", ref.label_times}, {"eos_frame", ref.eos_frame}};
  return j.dump();
}

std::vector<int> diagonal_reference_times(const ReferenceAlignment &ref, int T,
                                          int U) {
  if (T < 1 || U < 0) {
    throw InvalidInputError("reference times: need T >= 1 and U >= 0");
  }
  if (static_cast<int>(ref.label_times.size()) != U) {
    std::ostringstream msg;
    msg << "reference times: got " << ref.label_times.size()
        << " label times for U = " << U;
    throw InvalidInputError(msg.str());
  }
  int prev = 1;
  for (int u = 0; u < U; ++u) {
    const int tu = ref.label_times[u];
    if (tu < 1 || tu > T) {
      throw InvalidInputError("reference times: label time outside 1..T");
    }
    if (tu < prev) {
      throw InvalidInputError("reference times: label times must be non-decreasing");
    }
    prev = tu;
  }

  // Walk the reference path; each move advances one anti-diagonal.
  std::vector<int> times;
  times.reserve(T + U + 1);
  int t = 1;
  int u = 0;
  times.push_back(t);  // (1, 0) on diagonal 1
  while (u < U) {
    if (t < ref.label_times[u]) {
      ++t;  // blank
    } else {
      ++u;  // label emitted at frame label_times[u-1]
    }
    times.push_back(t);
  }
  while (t <= T) {
    ++t;  // blanks to (T, U), then the terminal move to (T+1, U)
    times.push_back(t);
  }
  return times;
}

DelayField delay_matrix(const std::vector<int> &ref_times, int T, int U) {
  if (static_cast<int>(ref_times.size()) != T + U + 1) {
    throw InvalidInputError("delay_matrix: reference times must cover T+U+1 diagonals");
  }
  DelayField f;
  f.T = T;
  f.U = U;
  f.ref_times = ref_times;
  f.d = Grid<double>(T + 1, U + 1, 0.0);
  for (int t = 1; t <= T + 1; ++t) {
    for (int u = 0; u <= U; ++u) {
      // t + u <= T + U + 1 for every cell of the extended grid.
      f.d.at(t - 1, u) = std::max(0, t - ref_times[t + u - 1]);
    }
  }
  return f;
}

ExpectedDelays expected_delays(const FBTables &fb, const DelayField &delays) {
  if (fb.T != delays.T || fb.U != delays.U) {
    throw InvalidInputError("expected_delays: table/delay shape mismatch");
  }
  if (!std::isfinite(fb.log_likelihood)) {
    throw DegenerateLatticeError("expected_delays: likelihood is not finite");
  }
  ExpectedDelays e;
  e.per_diagonal.resize(fb.T + fb.U + 1, 0.0);
  for (int n = 1; n <= fb.T + fb.U + 1; ++n) {
    double acc = 0.0;
    for (const DiagonalCell &c : diagonal_posteriors(fb, n)) {
      acc += c.posterior * delays.delay(c.t, c.u);
    }
    e.per_diagonal[n - 1] = acc;
  }
  return e;
}

GradientField expected_delay_gradients(const FBTables &fb,
                                       const DelayField &delays,
                                       const ExpectedDelays &expected) {
  if (fb.T != delays.T || fb.U != delays.U) {
    throw InvalidInputError("delay gradients: table/delay shape mismatch");
  }
  if (expected.diagonals() != fb.T + fb.U + 1) {
    throw InvalidInputError("delay gradients: expected-delay size mismatch");
  }
  if (!std::isfinite(fb.log_likelihood)) {
    throw DegenerateLatticeError("delay gradients: likelihood is not finite");
  }
  const int T = fb.T;
  const int U = fb.U;
  const double ll = fb.log_likelihood;
  GradientField g(T, U);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      const double target = expected.at(t + u + 1);
      if (u < U) {
        const double w = std::exp(fb.alpha(t, u) + fb.beta(t, u + 1) - ll);
        g.label(t, u) = w * (delays.delay(t, u + 1) - target);
      }
      const double w = std::exp(fb.alpha(t, u) + fb.beta(t + 1, u) - ll);
      g.blank(t, u) = w * (delays.delay(t + 1, u) - target);
    }
  }
  return g;
}

GradientField min_latency_gradients(const GradientField &trans_grads,
                                    const FBTables &fb,
                                    const DelayField &delays,
                                    const ExpectedDelays &expected,
                                    double lambda) {
  if (trans_grads.T != fb.T || trans_grads.U != fb.U) {
    throw InvalidInputError("min_latency_gradients: gradient shape mismatch");
  }
  if (fb.T != delays.T || fb.U != delays.U ||
      expected.diagonals() != fb.T + fb.U + 1) {
    throw InvalidInputError("min_latency_gradients: delay shape mismatch");
  }
  const int T = fb.T;
  const int U = fb.U;
  GradientField g(T, U);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      const double target = expected.at(t + u + 1);
      if (u < U) {
        g.label(t, u) = trans_grads.label(t, u) *
                        (1.0 - lambda * (delays.delay(t, u + 1) - target));
      }
      g.blank(t, u) = trans_grads.blank(t, u) *
                      (1.0 - lambda * (delays.delay(t + 1, u) - target));
    }
  }
  return g;
}

double min_latency_loss(double loss, const ExpectedDelays &expected,
                        double lambda) {
  return loss + lambda * expected.mean();
}

}  // namespace translat
