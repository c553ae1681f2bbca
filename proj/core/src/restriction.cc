// core/src/restriction.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/restriction.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/log_math.h"

namespace translat {

using nlohmann::json;

MaskField mask_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInputError(std::string("masks: unparseable JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m_blank") || !j.contains("m_label")) {
    throw InvalidInputError("masks: expected object with m_blank and m_label");
  }
  const json &blank_rows = j["m_blank"];
  const json &label_rows = j["m_label"];
  if (!blank_rows.is_array() || blank_rows.empty() || !label_rows.is_array() ||
      blank_rows.size() != label_rows.size()) {
    throw InvalidInputError("masks: m_blank and m_label must have T rows each");
  }
  const int T = static_cast<int>(blank_rows.size());
  const int U = static_cast<int>(blank_rows[0].size()) - 1;
  if (U < 0) throw InvalidInputError("masks: m_blank rows must have U+1 entries");
  MaskField m(T, U, 0);
  auto fill = [](const json &rows, int cols, const char *what,
                 Grid<std::uint8_t> *out) {
    for (int r = 0; r < out->rows(); ++r) {
      const json &row = rows[r];
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        throw InvalidInputError(std::string("masks: ragged ") + what + " table");
      }
      for (int c = 0; c < cols; ++c) {
        if (!row[c].is_number_integer() ||
            (row[c].get<int>() != 0 && row[c].get<int>() != 1)) {
          throw InvalidInputError(std::string("masks: ") + what +
                                  " entries must be 0 or 1");
        }
        out->at(r, c) = static_cast<std::uint8_t>(row[c].get<int>());
      }
    }
  };
  fill(blank_rows, U + 1, "m_blank", &m.m_blank);
  fill(label_rows, U, "m_label", &m.m_label);
  return m;
}

std::string mask_to_json(const MaskField &masks) {
  json blank_rows = json::array();
  json label_rows = json::array();
  for (int t = 1; t <= masks.T; ++t) {
    json brow = json::array();
    for (int u = 0; u <= masks.U; ++u) brow.push_back(masks.blank(t, u) ? 1 : 0);
    blank_rows.push_back(std::move(brow));
    json lrow = json::array();
    for (int u = 1; u <= masks.U; ++u) lrow.push_back(masks.label(t, u) ? 1 : 0);
    label_rows.push_back(std::move(lrow));
  }
  json j{{"m_blank", std::move(blank_rows)}, {"m_label", std::move(label_rows)}};
  return j.dump();
}

namespace {

// Boolean reachability from (1, 0) under the gates; used to reject masks
// that leave no complete path.  Returns the first anti-diagonal with no
// reachable cell, or 0 when the terminal is reachable.
int first_blocked_diagonal(const MaskField &m) {
  const int T = m.T;
  const int U = m.U;
  Grid<std::uint8_t> reach(T + 1, U + 1, 0);
  reach.at(0, 0) = 1;
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (t == 1 && u == 0) continue;
      bool r = false;
      if (t > 1 && m.blank(t, u)) r = reach.at(t - 2, u) != 0;
      if (!r && u > 0 && m.label(t, u)) r = reach.at(t - 1, u - 1) != 0;
      reach.at(t - 1, u) = r ? 1 : 0;
    }
  }
  if (reach.at(T - 1, U) != 0) return 0;  // terminal move is ungated

  for (int n = 1; n <= T + U; ++n) {
    bool any = false;
    for (int t = std::max(1, n - U); t <= std::min(T, n); ++t) {
      if (reach.at(t - 1, n - t) != 0) {
        any = true;
        break;
      }
    }
    if (!any) return n;
  }
  return T + U + 1;
}

}  // namespace

MaskField build_masks(const ReferenceAlignment &ref, int left_buffer,
                      int right_buffer, int T, int U) {
  if (left_buffer < 0 || right_buffer < 0) {
    throw InvalidInputError("build_masks: buffers must be >= 0");
  }
  // Reuse the path walk's validation of label_times against (T, U).
  diagonal_reference_times(ref, T, U);

  MaskField m(T, U, 0);
  for (int u = 0; u <= U; ++u) {
    // time(0) := 1 anchors the leading blank row.
    const int tu = u == 0 ? 1 : ref.label_times[u - 1];
    for (int t = 1; t <= T; ++t) {
      const bool in_left = tu - left_buffer <= t;
      m.blank_entry(t, u) = (in_left && t < tu + right_buffer) ? 1 : 0;
      if (u >= 1) {
        m.label_entry(t, u) = (in_left && t <= tu + right_buffer) ? 1 : 0;
      }
    }
  }

  if (int n = first_blocked_diagonal(m); n != 0) {
    std::ostringstream msg;
    msg << "build_masks: no complete path survives; first blocked diagonal is "
        << n;
    throw OverRestrictionError(msg.str(), n);
  }
  return m;
}

LossResult masked_loss(const EmissionLattice &lattice, const MaskField &masks) {
  LossResult r;
  r.fb = forward_backward(lattice, &masks);
  if (r.fb.log_likelihood == kLogZero) {
    throw OverRestrictionError(
        "masked_loss: masks admit no alignment with nonzero probability", 0);
  }
  r.loss = -r.fb.log_likelihood;
  return r;
}

GradientField masked_loss_gradients(const FBTables &fb,
                                    const EmissionLattice &lattice,
                                    const MaskField &masks) {
  if (fb.T != lattice.T || fb.U != lattice.U || masks.T != lattice.T ||
      masks.U != lattice.U) {
    throw InvalidInputError("masked_loss_gradients: shape mismatch");
  }
  if (!std::isfinite(fb.log_likelihood)) {
    throw DegenerateLatticeError(
        "masked_loss_gradients: likelihood is not finite");
  }
  const int T = fb.T;
  const int U = fb.U;
  const double ll = fb.log_likelihood;
  GradientField g(T, U);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      // Pruned transitions carry exactly zero gradient.
      if (u < U && masks.label(t, u + 1)) {
        g.label(t, u) = -std::exp(fb.alpha(t, u) + fb.beta(t, u + 1) - ll);
      }
      const bool blank_open = t < T ? masks.blank(t + 1, u) : u == U;
      if (blank_open) {
        g.blank(t, u) = -std::exp(fb.alpha(t, u) + fb.beta(t + 1, u) - ll);
      }
    }
  }
  return g;
}

GradientField fastemit_gradients(const GradientField &grads, double lambda) {
  GradientField g = grads;
  for (double &x : g.d_label.data()) x *= 1.0 + lambda;
  return g;
}

}  // namespace translat
