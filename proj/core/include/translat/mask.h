// core/include/translat/mask.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_MASK_H_
#define TRANSLAT_MASK_H_

#include <string>

#include "translat/grid.h"

namespace translat {

/* Binary transition gates for alignment-restricted training.
 *
 * A gate applies to the transition that ARRIVES at cell (t, u):
 *   blank(t, u)  gates the blank move (t-1, u) -> (t, u),   t in 1..T, u in 0..U
 *   label(t, u)  gates the label move (t, u-1) -> (t, u),   t in 1..T, u in 1..U
 *
 * The terminal blank (T, U) -> (T+1, U) has no table entry and is never
 * gated.  Storage is 0-based: blank row t-1 col u; label row t-1 col u-1.
 */
struct MaskField {
  int T = 0;
  int U = 0;
  Grid<std::uint8_t> m_blank;  // T x (U+1)
  Grid<std::uint8_t> m_label;  // T x U

  MaskField() = default;
  MaskField(int T_, int U_, std::uint8_t fill = 1)
      : T(T_), U(U_), m_blank(T_, U_ + 1, fill), m_label(T_, U_, fill) {}

  bool blank(int t, int u) const { return m_blank.at(t - 1, u) != 0; }
  bool label(int t, int u) const { return m_label.at(t - 1, u - 1) != 0; }
  std::uint8_t &blank_entry(int t, int u) { return m_blank.at(t - 1, u); }
  std::uint8_t &label_entry(int t, int u) { return m_label.at(t - 1, u - 1); }
};

// JSON object with "m_blank" (T rows of U+1 zeros/ones) and "m_label"
// (T rows of U).  Row index is t-1; the label column index is u-1.
MaskField mask_from_json(const std::string &text);
std::string mask_to_json(const MaskField &masks);

}  // namespace translat

#endif  // TRANSLAT_MASK_H_
