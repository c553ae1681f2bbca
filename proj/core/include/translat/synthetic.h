// core/include/translat/synthetic.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_SYNTHETIC_H_
#define TRANSLAT_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "translat/latency.h"

namespace translat {

/* One synthetic utterance.  features[t-1] is the frame-t input vector of
 * dimension vocab+1: a noisy one-hot of the token spoken at frame t, with
 * index 0 reserved for silence.  labels are tokens in 1..vocab; reference
 * holds the first frame of each token's span and the last speech frame.
 */
struct SyntheticUtterance {
  std::string id;
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  ReferenceAlignment reference;

  int num_frames() const { return static_cast<int>(features.size()); }
  int num_labels() const { return static_cast<int>(labels.size()); }
};

struct CorpusConfig {
  int t_min = 8;
  int t_max = 12;
  int u_min = 2;
  int u_max = 4;
  int vocab = 8;             // tokens 1..vocab; 0 stays blank/silence
  double noise = 0.1;        // uniform feature noise amplitude
  int silence_frames = 2;    // trailing silence per utterance
  int count = 200;
  std::uint64_t seed = 7;
};

/* Deterministic corpus: utterance i draws from the sub-stream i of
 * config.seed, so the corpus is stable under count changes.  Each utterance
 * picks T in [t_min, t_max] and U in [u_min, u_max], splits the leading
 * T - silence_frames speech frames into U contiguous non-empty spans, and
 * assigns one random token per span.  Validates that every (T, U) draw is
 * feasible (u_max + silence_frames < t_min) and raises InvalidInputError
 * otherwise.
 */
std::vector<SyntheticUtterance> generate_corpus(const CorpusConfig &config);

// JSON-lines: {"id", "features", "labels", "reference"} per line.
std::string utterance_to_json(const SyntheticUtterance &utt);
SyntheticUtterance utterance_from_json(const std::string &line);
void save_corpus(const std::string &path,
                 const std::vector<SyntheticUtterance> &corpus);
std::vector<SyntheticUtterance> load_corpus(const std::string &path);

}  // namespace translat

#endif  // TRANSLAT_SYNTHETIC_H_
