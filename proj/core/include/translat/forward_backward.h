// core/include/translat/forward_backward.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_FORWARD_BACKWARD_H_
#define TRANSLAT_FORWARD_BACKWARD_H_

#include <vector>

#include "translat/grid.h"
#include "translat/lattice.h"
#include "translat/mask.h"

namespace translat {

/* Forward/backward score tables in natural-log space.
 *
 * Both tables cover t in 1..T+1, u in 0..U (storage row t-1).  Row T+1 is
 * the virtual terminal row: only (T+1, U) is meaningful, every other cell in
 * it holds -inf, as does any grid cell with no surviving path.
 *
 *   alpha(t, u): log path-probability mass from (1, 0) into (t, u)
 *   beta(t, u):  log path-probability mass from (t, u) to (T+1, U)
 *   alpha(1, 0) == beta(T+1, U) == 0
 *   alpha(T+1, U) == beta(1, 0) == log_likelihood
 */
struct FBTables {
  int T = 0;
  int U = 0;
  Grid<double> log_alpha;  // (T+1) x (U+1)
  Grid<double> log_beta;   // (T+1) x (U+1)
  double log_likelihood = 0.0;

  double alpha(int t, int u) const { return log_alpha.at(t - 1, u); }
  double beta(int t, int u) const { return log_beta.at(t - 1, u); }
};

/* Loss derivatives with respect to the raw (linear-space) per-cell
 * probabilities.  label(t, u) pairs with EmissionLattice::label(t, u),
 * blank(t, u) with EmissionLattice::blank(t, u).  For the plain transducer
 * loss every entry is <= 0.
 */
struct GradientField {
  int T = 0;
  int U = 0;
  Grid<double> d_label;  // T x U
  Grid<double> d_blank;  // T x (U+1)

  GradientField() = default;
  GradientField(int T_, int U_)
      : T(T_), U(U_), d_label(T_, U_, 0.0), d_blank(T_, U_ + 1, 0.0) {}

  double label(int t, int u) const { return d_label.at(t - 1, u); }
  double &label(int t, int u) { return d_label.at(t - 1, u); }
  double blank(int t, int u) const { return d_blank.at(t - 1, u); }
  double &blank(int t, int u) { return d_blank.at(t - 1, u); }
};

struct LossResult {
  double loss = 0.0;  // -log_likelihood
  FBTables fb;
};

// One cell of an anti-diagonal together with its posterior weight
// alpha(t, u) * beta(t, u) / likelihood.
struct DiagonalCell {
  int t = 0;
  int u = 0;
  double posterior = 0.0;
};

/* Forward recursion.  With masks, a transition contributes only where the
 * gate at its destination cell is set:
 *
 *   alpha(t, u) = logsumexp(alpha(t-1, u) + blank(t-1, u)   [m_blank(t, u)],
 *                           alpha(t, u-1) + label(t, u-1)   [m_label(t, u)])
 *   alpha(T+1, U) = alpha(T, U) + blank(T, U)               (never gated)
 *
 * masks == nullptr runs ungated; an all-ones mask takes the identical
 * floating-point path.  Raises InvalidInputError on dimension mismatch.
 */
Grid<double> forward(const EmissionLattice &lattice,
                     const MaskField *masks = nullptr);

/* Backward recursion, gated by the same destination-cell convention:
 *
 *   beta(t, u) = logsumexp(beta(t+1, u) + blank(t, u)   [m_blank(t+1, u)],
 *                          beta(t, u+1) + label(t, u)   [m_label(t, u+1)])
 *   beta(T, U) = beta(T+1, U) + blank(T, U)             (never gated)
 *
 * The blank move out of (T, u) with u < U leaves the grid without finishing
 * the labels and contributes nothing.
 */
Grid<double> backward(const EmissionLattice &lattice,
                      const MaskField *masks = nullptr);

// Runs both recursions; log_likelihood is taken from alpha(T+1, U).
FBTables forward_backward(const EmissionLattice &lattice,
                          const MaskField *masks = nullptr);

// Negative log-likelihood of the full path sum.  Raises
// DegenerateLatticeError when no alignment has nonzero probability.
LossResult transducer_loss(const EmissionLattice &lattice);

/* Derivatives of the loss with respect to raw probabilities:
 *
 *   d_label(t, u) = -alpha(t, u) * beta(t, u+1) / likelihood
 *   d_blank(t, u) = -alpha(t, u) * beta(t+1, u) / likelihood
 *
 * computed in log space and exponentiated once per entry.  fb must come from
 * an ungated run over the same lattice; gated gradients live in
 * restriction.h.  Raises DegenerateLatticeError on non-finite likelihood.
 */
GradientField loss_gradients(const FBTables &fb, const EmissionLattice &lattice);

/* Chain rule from probability-space gradients to pre-softmax score
 * gradients.  dist holds the full per-cell token probabilities (rows must
 * sum to 1 within 1e-9; blank is token 0); labels are the reference tokens,
 * each in 1..vocab-1.  For every cell:
 *
 *   d z_k = sum_j (dL/dP_j) P_j (delta_jk - P_k)
 *
 * where dL/dP is nonzero only for blank and, when u < U, the next reference
 * label.  Each cell's outputs sum to 0 up to rounding.
 */
TokenGrid logit_gradients(const GradientField &grads, const TokenGrid &dist,
                          const std::vector<int> &labels);

/* Posterior weight of every cell on anti-diagonal n (cells with t + u == n,
 * including the virtual terminal on n == T+U+1), ordered by ascending t.
 * The weights of one diagonal sum to 1 up to rounding; no renormalization is
 * applied.  Requires 1 <= n <= T+U+1 and a finite likelihood.
 */
std::vector<DiagonalCell> diagonal_posteriors(const FBTables &fb, int n);

}  // namespace translat

#endif  // TRANSLAT_FORWARD_BACKWARD_H_
