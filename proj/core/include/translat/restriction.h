// core/include/translat/restriction.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_RESTRICTION_H_
#define TRANSLAT_RESTRICTION_H_

#include "translat/forward_backward.h"
#include "translat/lattice.h"
#include "translat/latency.h"
#include "translat/mask.h"

namespace translat {

/* Alignment-restriction masks around the reference times:
 *
 *   m_blank(t, u) = 1  iff  time(u) - left_buffer <= t  and  t <  time(u) + right_buffer
 *   m_label(t, u) = 1  iff  time(u) - left_buffer <= t  and  t <= time(u) + right_buffer
 *
 * where time(u) = label_times[u-1] for u >= 1 and time(0) := 1 for the
 * leading blank row.  Buffers must be >= 0.  Verifies that at least one
 * complete path survives; otherwise raises OverRestrictionError naming the
 * first anti-diagonal with no reachable cell.
 */
MaskField build_masks(const ReferenceAlignment &ref, int left_buffer,
                      int right_buffer, int T, int U);

// Loss over the mask-surviving path set.  OverRestrictionError when that
// set is empty.  With all-ones masks this equals transducer_loss bit for bit.
LossResult masked_loss(const EmissionLattice &lattice, const MaskField &masks);

// Loss gradients under masking: the ungated formula times the gate of the
// transition's destination, so pruned transitions get exactly 0.  fb must
// come from a run gated by the same masks.
GradientField masked_loss_gradients(const FBTables &fb,
                                    const EmissionLattice &lattice,
                                    const MaskField &masks);

// Label-gradient boost: label entries scaled by (1 + lambda), blank entries
// copied unchanged.  lambda == 0 reproduces grads bit for bit.
GradientField fastemit_gradients(const GradientField &grads, double lambda);

}  // namespace translat

#endif  // TRANSLAT_RESTRICTION_H_
