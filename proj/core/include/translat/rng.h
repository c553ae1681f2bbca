// core/include/translat/rng.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_RNG_H_
#define TRANSLAT_RNG_H_

#include <cstdint>
#include <random>

namespace translat {

// SplitMix64 finalizer.  Used to derive independent seed streams from one
// top-level seed so that per-utterance and per-run randomness is stable under
// reordering.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Engine for the sub-stream `stream` of `seed`.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

}  // namespace translat

#endif  // TRANSLAT_RNG_H_
