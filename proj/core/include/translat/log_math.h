// core/include/translat/log_math.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_LOG_MATH_H_
#define TRANSLAT_LOG_MATH_H_

#include <cmath>
#include <limits>
#include <span>

namespace translat {

// Log-probability of an impossible event.  exp(kLogZero) == 0.0 exactly.
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving log space.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  // a >= b; a == -inf means both operands are log-zero.
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(sum_i exp(v[i])); kLogZero for an empty span.
inline double log_sum(std::span<const double> v) {
  double m = kLogZero;
  for (double x : v) m = std::max(m, x);
  if (m == kLogZero) return kLogZero;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace translat

#endif  // TRANSLAT_LOG_MATH_H_
