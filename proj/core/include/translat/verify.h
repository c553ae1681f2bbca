// core/include/translat/verify.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_VERIFY_H_
#define TRANSLAT_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace translat {

/* Self-check harness: random lattices are driven through the recursions and
 * compared against the exhaustive reference implementations and central
 * differences.  perturb_beta is a negative control that corrupts one
 * backward-table entry before the identity checks; a healthy build must
 * report failures with it on.
 */
struct VerifyOptions {
  int max_t = 6;
  int max_u = 4;
  int cases = 200;       // lattices for the equivalence/identity checks
  int grad_cases = 25;   // lattices for the difference checks
  std::uint64_t seed = 20260816;
  bool perturb_beta = false;
  std::string replay_path;  // where the first failing lattice is written
};

struct VerifyCheck {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;        // largest error seen
  std::string first_failure;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::string replay_path;  // non-empty once a failing lattice was serialized

  bool ok() const {
    for (const auto &c : checks)
      if (c.failures > 0) return false;
    return true;
  }
};

VerifyReport run_verification(const VerifyOptions &options);

// Fixed-width table plus a PASS/FAIL summary line, as printed by the CLI.
std::string format_report(const VerifyReport &report);

}  // namespace translat

#endif  // TRANSLAT_VERIFY_H_
