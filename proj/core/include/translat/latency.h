// core/include/translat/latency.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_LATENCY_H_
#define TRANSLAT_LATENCY_H_

#include <string>
#include <vector>

#include "translat/forward_backward.h"
#include "translat/grid.h"
#include "translat/lattice.h"

namespace translat {

/* Ground-truth emission times for one utterance.  label_times[u-1] is the
 * frame (1-based) at which the u-th label should be emitted; the sequence is
 * non-decreasing.  eos_frame is the last frame carrying speech.
 */
struct ReferenceAlignment {
  std::vector<int> label_times;
  int eos_frame = 0;
};

ReferenceAlignment reference_from_json(const std::string &text);
std::string reference_to_json(const ReferenceAlignment &ref);

/* Per-cell emission delays relative to the reference alignment path.
 *
 *   ref_time(n):  frame of the unique reference-path cell on anti-diagonal n,
 *                 n in 1..T+U+1
 *   delay(t, u):  max(0, t - ref_time(t + u)), in frames, for t in 1..T+1
 *                 and u in 0..U (storage row t-1)
 */
struct DelayField {
  int T = 0;
  int U = 0;
  std::vector<int> ref_times;  // index n-1
  Grid<double> d;              // (T+1) x (U+1)

  int ref_time(int n) const { return ref_times[n - 1]; }
  double delay(int t, int u) const { return d.at(t - 1, u); }
};

// Expected delay per anti-diagonal under the lattice posterior.
struct ExpectedDelays {
  std::vector<double> per_diagonal;  // index n-1, n in 1..T+U+1

  double at(int n) const { return per_diagonal[n - 1]; }
  int diagonals() const { return static_cast<int>(per_diagonal.size()); }
  double mean() const;
};

/* Walks the reference path and records its frame on every anti-diagonal:
 * from (1, 0), blanks until frame label_times[u], then the label step, after
 * the last label blanks to (T, U) and the terminal move to (T+1, U).  So
 * ref_time(1) == 1 and ref_time(T+U+1) == T+1.  Validates that label_times
 * has U non-decreasing entries within 1..T.
 */
std::vector<int> diagonal_reference_times(const ReferenceAlignment &ref, int T,
                                          int U);

// Bundles ref_times with the delay table delay(t, u) = max(0, t - ref_time(t+u)).
DelayField delay_matrix(const std::vector<int> &ref_times, int T, int U);

// expected(n) = sum over cells on diagonal n of posterior(t, u) * delay(t, u).
// Requires a finite likelihood in fb (DegenerateLatticeError otherwise).
ExpectedDelays expected_delays(const FBTables &fb, const DelayField &delays);

/* Derivatives of the expected delay of the NEXT diagonal with respect to the
 * raw per-cell probabilities:
 *
 *   d_label(t, u) = alpha(t, u) beta(t, u+1) / likelihood * (delay(t, u+1) - expected(t+u+1))
 *   d_blank(t, u) = alpha(t, u) beta(t+1, u) / likelihood * (delay(t+1, u) - expected(t+u+1))
 *
 * Entries carry both signs and vanish where the posterior does.
 */
GradientField expected_delay_gradients(const FBTables &fb,
                                       const DelayField &delays,
                                       const ExpectedDelays &expected);

/* Delay-discounted loss gradients: each transducer-loss entry is scaled by
 * the bracket of its transition,
 *
 *   label: trans_label(t, u) * (1 - lambda * (delay(t, u+1) - expected(t+u+1)))
 *   blank: trans_blank(t, u) * (1 - lambda * (delay(t+1, u) - expected(t+u+1)))
 *
 * lambda == 0 reproduces trans_grads bit for bit.
 */
GradientField min_latency_gradients(const GradientField &trans_grads,
                                    const FBTables &fb,
                                    const DelayField &delays,
                                    const ExpectedDelays &expected,
                                    double lambda);

// Reported scalar for delay-regularized training:
// loss + lambda * mean_n expected(n).
double min_latency_loss(double loss, const ExpectedDelays &expected,
                        double lambda);

}  // namespace translat

#endif  // TRANSLAT_LATENCY_H_
