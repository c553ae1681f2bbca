// core/include/translat/errors.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_ERRORS_H_
#define TRANSLAT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace translat {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent caller input: bad dimensions, out-of-range
// indices, unparseable files, infeasible configuration ranges.
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string &msg) : Error(msg) {}
};

// The lattice admits no complete alignment with nonzero probability.
class DegenerateLatticeError : public Error {
 public:
  explicit DegenerateLatticeError(const std::string &msg) : Error(msg) {}
};

// Alignment restriction masks prune every complete path.  first_blocked_diagonal
// is the smallest anti-diagonal index n with no reachable cell.
class OverRestrictionError : public Error {
 public:
  OverRestrictionError(const std::string &msg, int first_blocked_diagonal)
      : Error(msg), first_blocked_diagonal_(first_blocked_diagonal) {}
  int first_blocked_diagonal() const { return first_blocked_diagonal_; }

 private:
  int first_blocked_diagonal_;
};

// Exhaustive enumeration was requested for a grid whose alignment count
// exceeds the configured cap.
class InstanceTooLargeError : public Error {
 public:
  explicit InstanceTooLargeError(const std::string &msg) : Error(msg) {}
};

// Training produced a non-finite mean loss.  epoch is the first epoch at
// which divergence was observed.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string &msg, int epoch)
      : Error(msg), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace translat

#endif  // TRANSLAT_ERRORS_H_
