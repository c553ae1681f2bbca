// core/src/lattice.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/lattice.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/log_math.h"

namespace translat {

namespace {

using nlohmann::json;

// -inf travels as JSON null; every other entry must be a finite number <= 0.
double entry_from_json(const json &j, const char *what) {
  if (j.is_null()) return kLogZero;
  if (!j.is_number()) {
    throw InvalidInputError(std::string("lattice: non-numeric ") + what +
                            " entry");
  }
  double x = j.get<double>();
  if (std::isnan(x)) {
    throw InvalidInputError(std::string("lattice: NaN ") + what + " entry");
  }
  if (x > 0.0) {
    throw InvalidInputError(std::string("lattice: positive log-probability in ") +
                            what);
  }
  return x;
}

json entry_to_json(double x) {
  if (x == kLogZero) return nullptr;
  return x;
}

void parse_table(const json &rows, int T, int cols, const char *what,
                 Grid<double> *out) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != T) {
    throw InvalidInputError(std::string("lattice: ") + what + " must have T rows");
  }
  for (int r = 0; r < T; ++r) {
    const json &row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      std::ostringstream msg;
      msg << "lattice: " << what << " row " << r << " must have " << cols
          << " columns";
      throw InvalidInputError(msg.str());
    }
    for (int c = 0; c < cols; ++c) {
      out->at(r, c) = entry_from_json(row[c], what);
    }
  }
}

}  // namespace

EmissionLattice lattice_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInputError(std::string("lattice: unparseable JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("T") || !j.contains("U") ||
      !j.contains("log_p_label") || !j.contains("log_p_blank")) {
    throw InvalidInputError(
        "lattice: expected object with T, U, log_p_label, log_p_blank");
  }
  if (!j["T"].is_number_integer() || !j["U"].is_number_integer()) {
    throw InvalidInputError("lattice: T and U must be integers");
  }
  int T = j["T"].get<int>();
  int U = j["U"].get<int>();
  if (T < 1 || U < 0) {
    throw InvalidInputError("lattice: need T >= 1 and U >= 0");
  }
  EmissionLattice lat(T, U);
  parse_table(j["log_p_label"], T, U, "log_p_label", &lat.log_p_label);
  parse_table(j["log_p_blank"], T, U + 1, "log_p_blank", &lat.log_p_blank);
  return lat;
}

std::string lattice_to_json(const EmissionLattice &lattice) {
  json labels = json::array();
  json blanks = json::array();
  for (int t = 1; t <= lattice.T; ++t) {
    json lrow = json::array();
    for (int u = 0; u < lattice.U; ++u) lrow.push_back(entry_to_json(lattice.label(t, u)));
    labels.push_back(std::move(lrow));
    json brow = json::array();
    for (int u = 0; u <= lattice.U; ++u) brow.push_back(entry_to_json(lattice.blank(t, u)));
    blanks.push_back(std::move(brow));
  }
  json j{{"T", lattice.T},
         {"U", lattice.U},
         {"log_p_label", std::move(labels)},
         {"log_p_blank", std::move(blanks)}};
  return j.dump(2);
}

EmissionLattice load_lattice(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("lattice: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return lattice_from_json(buf.str());
}

void save_lattice(const std::string &path, const EmissionLattice &lattice) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("lattice: cannot write " + path);
  out << lattice_to_json(lattice) << "\n";
}

}  // namespace translat
