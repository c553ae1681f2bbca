// tests/test_lattice.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "translat/errors.h"
#include "translat/lattice.h"
#include "translat/log_math.h"

using namespace translat;

TEST_CASE("lattice JSON round-trip preserves every entry") {
  EmissionLattice lat(2, 1);
  lat.label(1, 0) = std::log(0.5);
  lat.label(2, 0) = std::log(0.25);
  lat.blank(1, 0) = std::log(0.5);
  lat.blank(1, 1) = kLogZero;
  lat.blank(2, 0) = -0.0;
  lat.blank(2, 1) = std::log(0.125);

  const EmissionLattice back = lattice_from_json(lattice_to_json(lat));
  CHECK(back.T == 2);
  CHECK(back.U == 1);
  CHECK(back.log_p_label == lat.log_p_label);
  CHECK(back.log_p_blank == lat.log_p_blank);
}

TEST_CASE("minus infinity crosses JSON as null") {
  EmissionLattice lat(1, 0);
  lat.blank(1, 0) = kLogZero;
  const std::string text = lattice_to_json(lat);
  CHECK(text.find("null") != std::string::npos);
  CHECK(lattice_from_json(text).blank(1, 0) == kLogZero);
}

TEST_CASE("lattice JSON validation") {
  CHECK_THROWS_AS(lattice_from_json("not json"), InvalidInputError);
  CHECK_THROWS_AS(lattice_from_json("{}"), InvalidInputError);
  // T = 0 is not a lattice.
  CHECK_THROWS_AS(
      lattice_from_json(R"({"T":0,"U":0,"log_p_label":[],"log_p_blank":[]})"),
      InvalidInputError);
  // Row count has to match T.
  CHECK_THROWS_AS(lattice_from_json(
                      R"({"T":2,"U":0,"log_p_label":[[]],"log_p_blank":[[-1.0]]})"),
                  InvalidInputError);
  // Positive entries are not log-probabilities.
  CHECK_THROWS_AS(
      lattice_from_json(
          R"({"T":1,"U":0,"log_p_label":[[]],"log_p_blank":[[0.5]]})"),
      InvalidInputError);
}

TEST_CASE("U = 0 lattices carry empty label rows") {
  EmissionLattice lat(3, 0, std::log(0.9));
  const EmissionLattice back = lattice_from_json(lattice_to_json(lat));
  CHECK(back.U == 0);
  CHECK(back.blank(3, 0) == doctest::Approx(std::log(0.9)));
}

TEST_CASE("file round-trip") {
  EmissionLattice lat(2, 2, std::log(0.3));
  const std::string path = "lattice_roundtrip_test.json";
  save_lattice(path, lat);
  const EmissionLattice back = load_lattice(path);
  CHECK(back.log_p_label == lat.log_p_label);
  CHECK(back.log_p_blank == lat.log_p_blank);
  std::remove(path.c_str());
}
