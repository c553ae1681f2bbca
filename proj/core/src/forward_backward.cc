// core/src/forward_backward.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/forward_backward.h"

#include <cmath>
#include <sstream>

#include "translat/errors.h"
#include "translat/log_math.h"

namespace translat {

namespace {

void check_mask_shape(const EmissionLattice &lattice, const MaskField *masks) {
  if (masks != nullptr && (masks->T != lattice.T || masks->U != lattice.U)) {
    std::ostringstream msg;
    msg << "masks are " << masks->T << "x" << masks->U << " but lattice is "
        << lattice.T << "x" << lattice.U;
    throw InvalidInputError(msg.str());
  }
}

}  // namespace

Grid<double> forward(const EmissionLattice &lattice, const MaskField *masks) {
  check_mask_shape(lattice, masks);
  const int T = lattice.T;
  const int U = lattice.U;
  Grid<double> a(T + 1, U + 1, kLogZero);

  a.at(0, 0) = 0.0;  // alpha(1, 0) = 1
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (t == 1 && u == 0) continue;
      double v = kLogZero;
      if (t > 1 && (masks == nullptr || masks->blank(t, u))) {
        v = a.at(t - 2, u) + lattice.blank(t - 1, u);
      }
      if (u > 0 && (masks == nullptr || masks->label(t, u))) {
        v = log_add(v, a.at(t - 1, u - 1) + lattice.label(t, u - 1));
      }
      a.at(t - 1, u) = v;
    }
  }
  // Terminal blank out of (T, U); the row T+1 stays -inf elsewhere.
  a.at(T, U) = a.at(T - 1, U) + lattice.blank(T, U);
  return a;
}

Grid<double> backward(const EmissionLattice &lattice, const MaskField *masks) {
  check_mask_shape(lattice, masks);
  const int T = lattice.T;
  const int U = lattice.U;
  Grid<double> b(T + 1, U + 1, kLogZero);

  b.at(T, U) = 0.0;  // beta(T+1, U) = 1
  for (int t = T; t >= 1; --t) {
    for (int u = U; u >= 0; --u) {
      double v = kLogZero;
      if (t < T) {
        if (masks == nullptr || masks->blank(t + 1, u)) {
          v = b.at(t, u) + lattice.blank(t, u);
        }
      } else if (u == U) {
        // Terminal move (T, U) -> (T+1, U), never gated.
        v = b.at(T, U) + lattice.blank(T, U);
      }
      if (u < U && (masks == nullptr || masks->label(t, u + 1))) {
        v = log_add(v, b.at(t - 1, u + 1) + lattice.label(t, u));
      }
      b.at(t - 1, u) = v;
    }
  }
  return b;
}

FBTables forward_backward(const EmissionLattice &lattice,
                          const MaskField *masks) {
  FBTables fb;
  fb.T = lattice.T;
  fb.U = lattice.U;
  fb.log_alpha = forward(lattice, masks);
  fb.log_beta = backward(lattice, masks);
  fb.log_likelihood = fb.log_alpha.at(lattice.T, lattice.U);
  return fb;
}

LossResult transducer_loss(const EmissionLattice &lattice) {
  LossResult r;
  r.fb = forward_backward(lattice);
  if (r.fb.log_likelihood == kLogZero) {
    throw DegenerateLatticeError(
        "transducer_loss: no surviving alignment has nonzero probability");
  }
  r.loss = -r.fb.log_likelihood;
  return r;
}

GradientField loss_gradients(const FBTables &fb,
                             const EmissionLattice &lattice) {
  if (fb.T != lattice.T || fb.U != lattice.U) {
    throw InvalidInputError("loss_gradients: table/lattice shape mismatch");
  }
  if (!std::isfinite(fb.log_likelihood)) {
    throw DegenerateLatticeError(
        "loss_gradients: likelihood is not finite; no surviving alignment");
  }
  const int T = fb.T;
  const int U = fb.U;
  const double ll = fb.log_likelihood;
  GradientField g(T, U);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      // dL/dP = -alpha(t, u) * beta(successor) / likelihood.
      if (u < U) {
        g.label(t, u) = -std::exp(fb.alpha(t, u) + fb.beta(t, u + 1) - ll);
      }
      g.blank(t, u) = -std::exp(fb.alpha(t, u) + fb.beta(t + 1, u) - ll);
    }
  }
  return g;
}

TokenGrid logit_gradients(const GradientField &grads, const TokenGrid &dist,
                          const std::vector<int> &labels) {
  const int T = grads.T;
  const int U = grads.U;
  if (dist.T != T || dist.num_contexts != U + 1) {
    throw InvalidInputError("logit_gradients: distribution shape mismatch");
  }
  if (static_cast<int>(labels.size()) != U) {
    throw InvalidInputError("logit_gradients: need exactly U reference labels");
  }
  for (int label : labels) {
    if (label < 1 || label >= dist.vocab) {
      throw InvalidInputError("logit_gradients: reference label out of vocabulary");
    }
  }

  const int K = dist.vocab;
  TokenGrid dz(T, U + 1, K);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double sum = 0.0;
      for (int k = 0; k < K; ++k) sum += dist.at(t, u, k);
      if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "logit_gradients: cell (" << t << ", " << u
            << ") probabilities sum to " << sum;
        throw InvalidInputError(msg.str());
      }

      const double gb = grads.blank(t, u);
      const double gl = u < U ? grads.label(t, u) : 0.0;
      const int y = u < U ? labels[u] : -1;
      // s = sum_j (dL/dP_j) P_j over the two touched tokens.
      double s = gb * dist.at(t, u, 0);
      if (u < U) s += gl * dist.at(t, u, y);
      for (int k = 0; k < K; ++k) {
        double direct = 0.0;
        if (k == 0) direct = gb;
        if (k == y) direct = gl;
        dz.at(t, u, k) = dist.at(t, u, k) * (direct - s);
      }
    }
  }
  return dz;
}

std::vector<DiagonalCell> diagonal_posteriors(const FBTables &fb, int n) {
  const int T = fb.T;
  const int U = fb.U;
  if (n < 1 || n > T + U + 1) {
    std::ostringstream msg;
    msg << "diagonal_posteriors: n = " << n << " outside 1.." << T + U + 1;
    throw InvalidInputError(msg.str());
  }
  if (!std::isfinite(fb.log_likelihood)) {
    throw DegenerateLatticeError(
        "diagonal_posteriors: likelihood is not finite");
  }
  std::vector<DiagonalCell> cells;
  const int t_lo = std::max(1, n - U);
  const int t_hi = std::min(T + 1, n);
  for (int t = t_lo; t <= t_hi; ++t) {
    const int u = n - t;
    if (t == T + 1 && u != U) continue;  // only the terminal exists in row T+1
    double w = std::exp(fb.alpha(t, u) + fb.beta(t, u) - fb.log_likelihood);
    cells.push_back(DiagonalCell{t, u, w});
  }
  return cells;
}

}  // namespace translat
