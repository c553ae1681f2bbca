// core/src/brute_force.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/brute_force.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "translat/errors.h"

namespace translat {

namespace {

// Product of move probabilities along one path, in linear space.
// Returns -1 when masks prune the path.
long double path_probability(const EmissionLattice &lattice,
                             const AlignmentPath &path,
                             const MaskField *masks) {
  long double p = 1.0L;
  for (std::size_t i = 0; i < path.moves.size(); ++i) {
    const Cell from = path.cells[i];
    const Cell to = path.cells[i + 1];
    if (masks != nullptr && to.t <= lattice.T) {
      const bool open = path.moves[i] == Move::kBlank
                            ? masks->blank(to.t, to.u)
                            : masks->label(to.t, to.u);
      if (!open) return -1.0L;
    }
    const double logp = path.moves[i] == Move::kBlank
                            ? lattice.blank(from.t, from.u)
                            : lattice.label(from.t, from.u);
    p *= std::exp(static_cast<long double>(logp));
  }
  return p;
}

void extend(int T, int U, AlignmentPath *cur,
            std::vector<AlignmentPath> *out) {
  const Cell at = cur->cells.back();
  if (at.t == T + 1) {
    out->push_back(*cur);
    return;
  }
  // Blank first, then label: depth-first, lexicographic in move order.
  // A blank out of row t == T is a dead end unless all labels are done.
  if (at.t < T || at.u == U) {
    cur->moves.push_back(Move::kBlank);
    cur->cells.push_back(Cell{at.t + 1, at.u});
    extend(T, U, cur, out);
    cur->moves.pop_back();
    cur->cells.pop_back();
  }
  if (at.u < U) {
    cur->moves.push_back(Move::kLabel);
    cur->cells.push_back(Cell{at.t, at.u + 1});
    extend(T, U, cur, out);
    cur->moves.pop_back();
    cur->cells.pop_back();
  }
}

}  // namespace

std::int64_t count_alignments(int T, int U) {
  if (T < 1 || U < 0) {
    throw InvalidInputError("count_alignments: need T >= 1 and U >= 0");
  }
  // C(T-1+U, U) with overflow guard; anything past the enumeration cap is
  // reported saturated rather than exact.
  long double c = 1.0L;
  for (int i = 1; i <= U; ++i) {
    c = c * static_cast<long double>(T - 1 + i) / static_cast<long double>(i);
    if (c > 4e18L) return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(std::llround(c));
}

std::vector<AlignmentPath> enumerate_alignments(int T, int U,
                                                std::int64_t cap) {
  const std::int64_t n = count_alignments(T, U);
  if (n > cap) {
    std::ostringstream msg;
    msg << "enumerate_alignments: " << n << " alignments for T = " << T
        << ", U = " << U << " exceed the cap of " << cap;
    throw InstanceTooLargeError(msg.str());
  }
  std::vector<AlignmentPath> out;
  out.reserve(static_cast<std::size_t>(n));
  AlignmentPath cur;
  cur.cells.push_back(Cell{1, 0});
  extend(T, U, &cur, &out);
  return out;
}

double brute_force_likelihood(const EmissionLattice &lattice,
                              const std::vector<AlignmentPath> &paths,
                              const MaskField *masks) {
  std::vector<long double> terms;
  terms.reserve(paths.size());
  for (const AlignmentPath &path : paths) {
    const long double p = path_probability(lattice, path, masks);
    if (p >= 0.0L) terms.push_back(p);
  }
  // Ascending summation keeps the accumulation reproducible and tight.
  std::sort(terms.begin(), terms.end());
  long double total = 0.0L;
  for (long double p : terms) total += p;
  return static_cast<double>(total);
}

double brute_force_expected_delay(const EmissionLattice &lattice,
                                  const std::vector<AlignmentPath> &paths,
                                  const DelayField &delays, int n) {
  if (paths.empty()) {
    throw InvalidInputError("brute_force_expected_delay: no paths given");
  }
  const int diagonals = static_cast<int>(paths.front().cells.size());
  if (n < 1 || n > diagonals) {
    throw InvalidInputError("brute_force_expected_delay: diagonal out of range");
  }
  std::vector<long double> terms;
  terms.reserve(paths.size());
  long double total = 0.0L;
  for (const AlignmentPath &path : paths) {
    const long double p = path_probability(lattice, path, nullptr);
    const Cell c = path.cells[n - 1];
    terms.push_back(p * static_cast<long double>(delays.delay(c.t, c.u)));
    total += p;
  }
  if (total <= 0.0L) {
    throw DegenerateLatticeError("brute_force_expected_delay: zero total mass");
  }
  std::sort(terms.begin(), terms.end());
  long double acc = 0.0L;
  for (long double x : terms) acc += x;
  return static_cast<double>(acc / total);
}

double central_difference(
    const std::function<double(const EmissionLattice &)> &fn,
    const EmissionLattice &lattice, int t, int u, EntryKind kind,
    double step) {
  if (step <= 0.0) {
    throw InvalidInputError("central_difference: step must be positive");
  }
  const double logp = kind == EntryKind::kLabel ? lattice.label(t, u)
                                                : lattice.blank(t, u);
  const double p = std::exp(logp);
  double h = step;
  int halvings = 0;
  while (p - h <= 0.0) {
    if (++halvings > 10) {
      throw InvalidInputError(
          "central_difference: probability too small for any usable step");
    }
    h *= 0.5;
  }

  EmissionLattice work = lattice;
  double &entry = kind == EntryKind::kLabel ? work.label(t, u)
                                            : work.blank(t, u);
  entry = std::log(p + h);
  const double up = fn(work);
  entry = std::log(p - h);
  const double down = fn(work);
  return (up - down) / (2.0 * h);
}

EmissionLattice random_lattice(int T, int U, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  EmissionLattice lat(T, U);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u < U; ++u) lat.label(t, u) = std::log(unif(rng));
    for (int u = 0; u <= U; ++u) lat.blank(t, u) = std::log(unif(rng));
  }
  return lat;
}

}  // namespace translat
