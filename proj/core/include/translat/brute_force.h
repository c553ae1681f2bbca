// core/include/translat/brute_force.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive reference implementations used to cross-check the recursions.
// Everything here works by enumerating complete alignments and summing path
// products in linear probability space; none of it shares arithmetic with
// forward_backward.cc.

#ifndef TRANSLAT_BRUTE_FORCE_H_
#define TRANSLAT_BRUTE_FORCE_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "translat/lattice.h"
#include "translat/latency.h"
#include "translat/mask.h"

namespace translat {

enum class Move : std::uint8_t { kBlank = 0, kLabel = 1 };

struct Cell {
  int t = 0;
  int u = 0;
  bool operator==(const Cell &) const = default;
};

// One complete alignment.  cells[0] == (1, 0), cells.back() == (T+1, U),
// moves[i] takes cells[i] to cells[i+1], and the final move is the blank
// out of (T, U).  cells[n-1] is the unique cell on anti-diagonal n.
struct AlignmentPath {
  std::vector<Move> moves;   // T + U entries
  std::vector<Cell> cells;   // T + U + 1 entries
};

// C(T-1+U, U): the number of complete alignments.
std::int64_t count_alignments(int T, int U);

// All complete alignments in depth-first order (blank branch first).
// Raises InstanceTooLargeError when the count exceeds cap and
// InvalidInputError for T < 1 or U < 0.
std::vector<AlignmentPath> enumerate_alignments(int T, int U,
                                                std::int64_t cap = 200000);

// Total path probability: for each surviving path the product of its move
// probabilities, accumulated in extended precision over ascending summands.
// With masks, a path survives only if every within-grid arrival it makes is
// gated on (same convention as forward()).
double brute_force_likelihood(const EmissionLattice &lattice,
                              const std::vector<AlignmentPath> &paths,
                              const MaskField *masks = nullptr);

// Expected delay over anti-diagonal n: sum over paths of
// (path probability / total) * delay(cell on diagonal n).
double brute_force_expected_delay(const EmissionLattice &lattice,
                                  const std::vector<AlignmentPath> &paths,
                                  const DelayField &delays, int n);

enum class EntryKind : std::uint8_t { kLabel = 0, kBlank = 1 };

/* Central difference of fn around one raw probability:
 *
 *   (fn(p + h) - fn(p - h)) / (2 h)
 *
 * The entry at (t, u) is perturbed in linear space without renormalizing
 * the cell.  If p - h <= 0 the step is halved, at most ten times; raises
 * InvalidInputError when no usable step remains.
 */
double central_difference(
    const std::function<double(const EmissionLattice &)> &fn,
    const EmissionLattice &lattice, int t, int u, EntryKind kind,
    double step = 1e-6);

// Lattice with entries drawn as log(p), p ~ U(0.05, 0.95).  Deliberately
// unnormalized; bounded away from 0 so difference quotients stay stable.
EmissionLattice random_lattice(int T, int U, std::mt19937_64 &rng);

}  // namespace translat

#endif  // TRANSLAT_BRUTE_FORCE_H_
