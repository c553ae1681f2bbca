// core/include/translat/model.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_MODEL_H_
#define TRANSLAT_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "translat/lattice.h"
#include "translat/synthetic.h"

namespace translat {

/* A trainable toy transducer.  Parameters live in one flat vector so the
 * optimizer and the difference checks can treat every model uniformly.
 *
 * scores() produces the pre-softmax score table for an utterance with the
 * predictor context of cell (t, u) fixed to the reference prefix
 * labels[0..u-1]; decode_scores() produces the scores of a single cell for
 * an arbitrary hypothesis prefix.
 */
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string kind() const = 0;
  virtual int vocab() const = 0;  // tokens including blank at index 0

  virtual TokenGrid scores(const SyntheticUtterance &utt) const = 0;
  virtual std::vector<double> decode_scores(const SyntheticUtterance &utt,
                                            int t,
                                            const std::vector<int> &prefix) const = 0;

  // Accumulates d(objective)/d(params) into param_grad, given the
  // d(objective)/d(score) table of one utterance.
  virtual void backprop(const SyntheticUtterance &utt,
                        const TokenGrid &score_grad,
                        std::vector<double> *param_grad) const = 0;

  virtual std::vector<double> &params() = 0;
  virtual const std::vector<double> &params() const = 0;

  virtual std::string to_json() const = 0;
};

// Free score table over (t, u, token) with t <= max_t, u <= max_u, shared
// across utterances.  Zero-initialized: every cell starts uniform.
std::unique_ptr<Model> make_table_model(int max_t, int max_u, int vocab);

struct NetworkDims {
  int feature_dim = 9;  // vocab + 1 for the default corpus
  int vocab = 9;        // tokens including blank
  int d_encoder = 16;
  int d_predictor = 16;
  int d_joint = 16;
};

/* Linear encoder, embedding predictor, single-hidden-layer joiner:
 *
 *   f_t = W x_t
 *   g_u = embedding[y_u]          (y_0 = 0, the start/blank context)
 *   h   = tanh(A f_t + B g_u + b)
 *   z   = C h + c
 *
 * Weights start uniform in [-0.1, 0.1] from the given seed.
 */
std::unique_ptr<Model> make_network_model(const NetworkDims &dims,
                                          std::uint64_t seed);

// Checkpoint round-trip.  The JSON carries "kind", the dimension header and
// every weight table.
std::unique_ptr<Model> model_from_json(const std::string &text);
void save_model(const std::string &path, const Model &model);
std::unique_ptr<Model> load_model(const std::string &path);

// Per-cell emission table of a model on an utterance: softmax distributions
// (dist, rows sum to 1) plus the lattice slice holding log P(next reference
// label) and log P(blank).  Raises DegenerateLatticeError when a cell's
// scores are so extreme that the softmax loses normalization.
struct Emission {
  EmissionLattice lattice;
  TokenGrid dist;
};
Emission emit_lattice(const Model &model, const SyntheticUtterance &utt);

}  // namespace translat

#endif  // TRANSLAT_MODEL_H_
