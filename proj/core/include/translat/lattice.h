// core/include/translat/lattice.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_LATTICE_H_
#define TRANSLAT_LATTICE_H_

#include <string>
#include <vector>

#include "translat/grid.h"

namespace translat {

/* Per-cell emission log-probabilities of a T x (U+1) alignment grid.
 *
 * Cells are addressed by frame t in 1..T and emitted-label count u in 0..U.
 * label(t, u) is the log-probability of emitting the (u+1)-th reference
 * label from cell (t, u) and is defined for u in 0..U-1; blank(t, u) is the
 * log-probability of consuming frame t at (t, u) and is defined for
 * u in 0..U.  Storage is 0-based row-major with row t-1.
 *
 * Entries are log-probabilities: finite non-positive values or -inf for an
 * impossible emission.  Rows need not come from a normalized distribution;
 * the loss below is defined for any assignment.
 */
struct EmissionLattice {
  int T = 0;
  int U = 0;
  Grid<double> log_p_label;  // T x U
  Grid<double> log_p_blank;  // T x (U+1)

  EmissionLattice() = default;
  EmissionLattice(int T_, int U_, double fill = 0.0)
      : T(T_), U(U_), log_p_label(T_, U_, fill), log_p_blank(T_, U_ + 1, fill) {}

  double label(int t, int u) const { return log_p_label.at(t - 1, u); }
  double &label(int t, int u) { return log_p_label.at(t - 1, u); }
  double blank(int t, int u) const { return log_p_blank.at(t - 1, u); }
  double &blank(int t, int u) { return log_p_blank.at(t - 1, u); }
};

/* Per-cell table of one value per vocabulary token (blank is token 0).
 * Holds scores, probabilities, or score-gradients depending on context.
 * t is 1-based; u indexes predictor contexts 0..num_contexts-1.
 */
struct TokenGrid {
  int T = 0;
  int num_contexts = 0;
  int vocab = 0;
  std::vector<double> v;

  TokenGrid() = default;
  TokenGrid(int T_, int num_contexts_, int vocab_, double fill = 0.0)
      : T(T_),
        num_contexts(num_contexts_),
        vocab(vocab_),
        v(static_cast<std::size_t>(T_) * num_contexts_ * vocab_, fill) {}

  double at(int t, int u, int k) const { return v[index(t, u, k)]; }
  double &at(int t, int u, int k) { return v[index(t, u, k)]; }

 private:
  std::size_t index(int t, int u, int k) const {
    return (static_cast<std::size_t>(t - 1) * num_contexts + u) * vocab + k;
  }
};

// Serialization.  The JSON object carries "T", "U", "log_p_label" (T rows of
// U values, row index t-1) and "log_p_blank" (T rows of U+1 values).  -inf is
// written as JSON null.  Parsing validates shapes and entry ranges and raises
// InvalidInputError on violation.
EmissionLattice lattice_from_json(const std::string &text);
std::string lattice_to_json(const EmissionLattice &lattice);
EmissionLattice load_lattice(const std::string &path);
void save_lattice(const std::string &path, const EmissionLattice &lattice);

}  // namespace translat

#endif  // TRANSLAT_LATTICE_H_
