// core/src/model.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/log_math.h"
#include "translat/rng.h"

namespace translat {

using nlohmann::json;

namespace {

void check_labels(const std::vector<int> &labels, int vocab,
                  const char *where) {
  for (int y : labels) {
    if (y < 1 || y >= vocab) {
      throw InvalidInputError(std::string(where) +
                              ": reference label out of vocabulary");
    }
  }
}

/* Free score table over (t, u, token).  One parameter per cell entry,
 * shared by every utterance; decoding clamps (t, u) into the table so long
 * hypotheses reuse the last row.
 */
class TableModel : public Model {
 public:
  TableModel(int max_t, int max_u, int vocab)
      : max_t_(max_t), max_u_(max_u), vocab_(vocab) {
    if (max_t < 1 || max_u < 0 || vocab < 2) {
      throw InvalidInputError("table model: need max_t >= 1 and vocab >= 2");
    }
    params_.assign(static_cast<std::size_t>(max_t) * (max_u + 1) * vocab, 0.0);
  }

  std::string kind() const override { return "table"; }
  int vocab() const override { return vocab_; }

  TokenGrid scores(const SyntheticUtterance &utt) const override {
    const int T = utt.num_frames();
    const int U = utt.num_labels();
    if (T > max_t_ || U > max_u_) {
      throw InvalidInputError("table model: utterance exceeds table capacity");
    }
    TokenGrid z(T, U + 1, vocab_);
    for (int t = 1; t <= T; ++t)
      for (int u = 0; u <= U; ++u)
        for (int k = 0; k < vocab_; ++k) z.at(t, u, k) = params_[index(t, u, k)];
    return z;
  }

  std::vector<double> decode_scores(const SyntheticUtterance &,
                                    int t,
                                    const std::vector<int> &prefix) const override {
    const int tc = std::min(t, max_t_);
    const int uc = std::min(static_cast<int>(prefix.size()), max_u_);
    std::vector<double> z(vocab_);
    for (int k = 0; k < vocab_; ++k) z[k] = params_[index(tc, uc, k)];
    return z;
  }

  void backprop(const SyntheticUtterance &utt, const TokenGrid &score_grad,
                std::vector<double> *param_grad) const override {
    if (param_grad->size() != params_.size()) {
      throw InvalidInputError("table model: gradient buffer size mismatch");
    }
    for (int t = 1; t <= utt.num_frames(); ++t)
      for (int u = 0; u <= utt.num_labels(); ++u)
        for (int k = 0; k < vocab_; ++k)
          (*param_grad)[index(t, u, k)] += score_grad.at(t, u, k);
  }

  std::vector<double> &params() override { return params_; }
  const std::vector<double> &params() const override { return params_; }

  std::string to_json() const override {
    json scores = json::array();
    for (int t = 1; t <= max_t_; ++t) {
      json trow = json::array();
      for (int u = 0; u <= max_u_; ++u) {
        json urow = json::array();
        for (int k = 0; k < vocab_; ++k) urow.push_back(params_[index(t, u, k)]);
        trow.push_back(std::move(urow));
      }
      scores.push_back(std::move(trow));
    }
    json j{{"kind", "table"},
           {"max_t", max_t_},
           {"max_u", max_u_},
           {"vocab", vocab_},
           {"scores", std::move(scores)}};
    return j.dump();
  }

  void load_scores(const json &scores) {
    for (int t = 1; t <= max_t_; ++t)
      for (int u = 0; u <= max_u_; ++u)
        for (int k = 0; k < vocab_; ++k)
          params_[index(t, u, k)] = scores[t - 1][u][k].get<double>();
  }

 private:
  std::size_t index(int t, int u, int k) const {
    return (static_cast<std::size_t>(t - 1) * (max_u_ + 1) + u) * vocab_ + k;
  }

  int max_t_;
  int max_u_;
  int vocab_;
  std::vector<double> params_;
};

/* Linear encoder + embedding predictor + tanh joiner.  The flat parameter
 * vector is the concatenation, all row-major:
 *
 *   W  d_encoder x feature_dim      encoder
 *   E  vocab x d_predictor          context embeddings (row 0 = start)
 *   A  d_joint x d_encoder          joiner, encoder side
 *   B  d_joint x d_predictor        joiner, predictor side
 *   b  d_joint                      joiner bias
 *   C  vocab x d_joint              output projection
 *   c  vocab                        output bias
 */
class NetworkModel : public Model {
 public:
  NetworkModel(const NetworkDims &dims, std::uint64_t seed) : dims_(dims) {
    if (dims.feature_dim < 1 || dims.vocab < 2 || dims.d_encoder < 1 ||
        dims.d_predictor < 1 || dims.d_joint < 1) {
      throw InvalidInputError("network model: malformed dimensions");
    }
    off_w_ = 0;
    off_e_ = off_w_ + dims.d_encoder * dims.feature_dim;
    off_a_ = off_e_ + dims.vocab * dims.d_predictor;
    off_b_ = off_a_ + dims.d_joint * dims.d_encoder;
    off_bias_ = off_b_ + dims.d_joint * dims.d_predictor;
    off_c_ = off_bias_ + dims.d_joint;
    off_cbias_ = off_c_ + dims.vocab * dims.d_joint;
    params_.assign(off_cbias_ + dims.vocab, 0.0);

    std::mt19937_64 rng = make_rng(seed, 0x6d6f64656cull);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    for (double &p : params_) p = unif(rng);
  }

  std::string kind() const override { return "network"; }
  int vocab() const override { return dims_.vocab; }
  const NetworkDims &dims() const { return dims_; }

  TokenGrid scores(const SyntheticUtterance &utt) const override {
    const int T = utt.num_frames();
    const int U = utt.num_labels();
    check_features(utt);
    check_labels(utt.labels, dims_.vocab, "network model");

    std::vector<std::vector<double>> f(T), g(U + 1);
    for (int t = 1; t <= T; ++t) f[t - 1] = encode(utt.features[t - 1]);
    for (int u = 0; u <= U; ++u) g[u] = embedding(context_token(utt.labels, u));

    TokenGrid z(T, U + 1, dims_.vocab);
    std::vector<double> h(dims_.d_joint);
    for (int t = 1; t <= T; ++t) {
      for (int u = 0; u <= U; ++u) {
        joint(f[t - 1], g[u], &h);
        for (int k = 0; k < dims_.vocab; ++k) {
          double acc = params_[off_cbias_ + k];
          const double *crow = &params_[off_c_ + k * dims_.d_joint];
          for (int j = 0; j < dims_.d_joint; ++j) acc += crow[j] * h[j];
          z.at(t, u, k) = acc;
        }
      }
    }
    return z;
  }

  std::vector<double> decode_scores(const SyntheticUtterance &utt, int t,
                                    const std::vector<int> &prefix) const override {
    check_features(utt);
    if (t < 1 || t > utt.num_frames()) {
      throw InvalidInputError("network model: decode frame out of range");
    }
    const int ctx = prefix.empty() ? 0 : prefix.back();
    if (ctx < 0 || ctx >= dims_.vocab) {
      throw InvalidInputError("network model: decode context out of vocabulary");
    }
    const std::vector<double> f = encode(utt.features[t - 1]);
    const std::vector<double> g = embedding(ctx);
    std::vector<double> h(dims_.d_joint);
    joint(f, g, &h);
    std::vector<double> z(dims_.vocab);
    for (int k = 0; k < dims_.vocab; ++k) {
      double acc = params_[off_cbias_ + k];
      const double *crow = &params_[off_c_ + k * dims_.d_joint];
      for (int j = 0; j < dims_.d_joint; ++j) acc += crow[j] * h[j];
      z[k] = acc;
    }
    return z;
  }

  /* Reverse pass.  With a = A f_t + B g_u + b, h = tanh(a), z = C h + c:
   *
   *   dC += dz h^T        dc += dz        dh = C^T dz
   *   da = dh (1 - h^2)   dA += da f^T    dB += da g^T    db += da
   *   df_t = sum_u A^T da(t, u)           dg_u = sum_t B^T da(t, u)
   *   dW += df_t x_t^T                    dE[ctx_u] += dg_u
   */
  void backprop(const SyntheticUtterance &utt, const TokenGrid &score_grad,
                std::vector<double> *param_grad) const override {
    if (param_grad->size() != params_.size()) {
      throw InvalidInputError("network model: gradient buffer size mismatch");
    }
    const int T = utt.num_frames();
    const int U = utt.num_labels();
    check_features(utt);
    check_labels(utt.labels, dims_.vocab, "network model");

    std::vector<std::vector<double>> f(T), g(U + 1);
    for (int t = 1; t <= T; ++t) f[t - 1] = encode(utt.features[t - 1]);
    for (int u = 0; u <= U; ++u) g[u] = embedding(context_token(utt.labels, u));

    std::vector<std::vector<double>> df(T, std::vector<double>(dims_.d_encoder, 0.0));
    std::vector<std::vector<double>> dg(U + 1, std::vector<double>(dims_.d_predictor, 0.0));
    std::vector<double> h(dims_.d_joint), dh(dims_.d_joint), da(dims_.d_joint);

    double *gw = param_grad->data();
    for (int t = 1; t <= T; ++t) {
      for (int u = 0; u <= U; ++u) {
        joint(f[t - 1], g[u], &h);
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int k = 0; k < dims_.vocab; ++k) {
          const double dz = score_grad.at(t, u, k);
          gw[off_cbias_ + k] += dz;
          const double *crow = &params_[off_c_ + k * dims_.d_joint];
          double *gcrow = &gw[off_c_ + k * dims_.d_joint];
          for (int j = 0; j < dims_.d_joint; ++j) {
            gcrow[j] += dz * h[j];
            dh[j] += crow[j] * dz;
          }
        }
        for (int j = 0; j < dims_.d_joint; ++j) {
          da[j] = dh[j] * (1.0 - h[j] * h[j]);
          gw[off_bias_ + j] += da[j];
          double *garow = &gw[off_a_ + j * dims_.d_encoder];
          for (int i = 0; i < dims_.d_encoder; ++i) garow[i] += da[j] * f[t - 1][i];
          double *gbrow = &gw[off_b_ + j * dims_.d_predictor];
          for (int i = 0; i < dims_.d_predictor; ++i) gbrow[i] += da[j] * g[u][i];
        }
        for (int i = 0; i < dims_.d_encoder; ++i) {
          double acc = 0.0;
          for (int j = 0; j < dims_.d_joint; ++j) {
            acc += params_[off_a_ + j * dims_.d_encoder + i] * da[j];
          }
          df[t - 1][i] += acc;
        }
        for (int i = 0; i < dims_.d_predictor; ++i) {
          double acc = 0.0;
          for (int j = 0; j < dims_.d_joint; ++j) {
            acc += params_[off_b_ + j * dims_.d_predictor + i] * da[j];
          }
          dg[u][i] += acc;
        }
      }
    }
    for (int t = 1; t <= T; ++t) {
      for (int i = 0; i < dims_.d_encoder; ++i) {
        double *grow = &gw[off_w_ + i * dims_.feature_dim];
        for (int d = 0; d < dims_.feature_dim; ++d) {
          grow[d] += df[t - 1][i] * utt.features[t - 1][d];
        }
      }
    }
    for (int u = 0; u <= U; ++u) {
      const int ctx = context_token(utt.labels, u);
      double *grow = &gw[off_e_ + ctx * dims_.d_predictor];
      for (int i = 0; i < dims_.d_predictor; ++i) grow[i] += dg[u][i];
    }
  }

  std::vector<double> &params() override { return params_; }
  const std::vector<double> &params() const override { return params_; }

  std::string to_json() const override {
    auto table = [&](std::size_t off, int rows, int cols) {
      json t = json::array();
      for (int r = 0; r < rows; ++r) {
        json row = json::array();
        for (int c = 0; c < cols; ++c) row.push_back(params_[off + r * cols + c]);
        t.push_back(std::move(row));
      }
      return t;
    };
    auto vec = [&](std::size_t off, int n) {
      json v = json::array();
      for (int i = 0; i < n; ++i) v.push_back(params_[off + i]);
      return v;
    };
    json j{{"kind", "network"},
           {"feature_dim", dims_.feature_dim},
           {"vocab", dims_.vocab},
           {"d_encoder", dims_.d_encoder},
           {"d_predictor", dims_.d_predictor},
           {"d_joint", dims_.d_joint},
           {"encoder", table(off_w_, dims_.d_encoder, dims_.feature_dim)},
           {"embeddings", table(off_e_, dims_.vocab, dims_.d_predictor)},
           {"joint_enc", table(off_a_, dims_.d_joint, dims_.d_encoder)},
           {"joint_pred", table(off_b_, dims_.d_joint, dims_.d_predictor)},
           {"joint_bias", vec(off_bias_, dims_.d_joint)},
           {"proj", table(off_c_, dims_.vocab, dims_.d_joint)},
           {"proj_bias", vec(off_cbias_, dims_.vocab)}};
    return j.dump();
  }

  void load_weights(const json &j) {
    auto table = [&](const char *name, std::size_t off, int rows, int cols) {
      const json &t = j.at(name);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          params_[off + r * cols + c] = t[r][c].get<double>();
    };
    auto vec = [&](const char *name, std::size_t off, int n) {
      const json &v = j.at(name);
      for (int i = 0; i < n; ++i) params_[off + i] = v[i].get<double>();
    };
    table("encoder", off_w_, dims_.d_encoder, dims_.feature_dim);
    table("embeddings", off_e_, dims_.vocab, dims_.d_predictor);
    table("joint_enc", off_a_, dims_.d_joint, dims_.d_encoder);
    table("joint_pred", off_b_, dims_.d_joint, dims_.d_predictor);
    vec("joint_bias", off_bias_, dims_.d_joint);
    table("proj", off_c_, dims_.vocab, dims_.d_joint);
    vec("proj_bias", off_cbias_, dims_.vocab);
  }

 private:
  static int context_token(const std::vector<int> &labels, int u) {
    return u == 0 ? 0 : labels[u - 1];
  }

  void check_features(const SyntheticUtterance &utt) const {
    for (const auto &x : utt.features) {
      if (static_cast<int>(x.size()) != dims_.feature_dim) {
        throw InvalidInputError("network model: feature dimension mismatch");
      }
    }
  }

  std::vector<double> encode(const std::vector<double> &x) const {
    std::vector<double> f(dims_.d_encoder);
    for (int i = 0; i < dims_.d_encoder; ++i) {
      const double *wrow = &params_[off_w_ + i * dims_.feature_dim];
      double acc = 0.0;
      for (int d = 0; d < dims_.feature_dim; ++d) acc += wrow[d] * x[d];
      f[i] = acc;
    }
    return f;
  }

  std::vector<double> embedding(int token) const {
    const double *row = &params_[off_e_ + token * dims_.d_predictor];
    return std::vector<double>(row, row + dims_.d_predictor);
  }

  void joint(const std::vector<double> &f, const std::vector<double> &g,
             std::vector<double> *h) const {
    for (int j = 0; j < dims_.d_joint; ++j) {
      double acc = params_[off_bias_ + j];
      const double *arow = &params_[off_a_ + j * dims_.d_encoder];
      for (int i = 0; i < dims_.d_encoder; ++i) acc += arow[i] * f[i];
      const double *brow = &params_[off_b_ + j * dims_.d_predictor];
      for (int i = 0; i < dims_.d_predictor; ++i) acc += brow[i] * g[i];
      (*h)[j] = std::tanh(acc);
    }
  }

  NetworkDims dims_;
  std::size_t off_w_, off_e_, off_a_, off_b_, off_bias_, off_c_, off_cbias_;
  std::vector<double> params_;
};

}  // namespace

std::unique_ptr<Model> make_table_model(int max_t, int max_u, int vocab) {
  return std::make_unique<TableModel>(max_t, max_u, vocab);
}

std::unique_ptr<Model> make_network_model(const NetworkDims &dims,
                                          std::uint64_t seed) {
  return std::make_unique<NetworkModel>(dims, seed);
}

std::unique_ptr<Model> model_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInputError(std::string("model: unparseable JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidInputError("model: missing kind");
  }
  try {
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "table") {
      auto m = std::make_unique<TableModel>(j.at("max_t").get<int>(),
                                            j.at("max_u").get<int>(),
                                            j.at("vocab").get<int>());
      m->load_scores(j.at("scores"));
      return m;
    }
    if (kind == "network") {
      NetworkDims dims;
      dims.feature_dim = j.at("feature_dim").get<int>();
      dims.vocab = j.at("vocab").get<int>();
      dims.d_encoder = j.at("d_encoder").get<int>();
      dims.d_predictor = j.at("d_predictor").get<int>();
      dims.d_joint = j.at("d_joint").get<int>();
      auto m = std::make_unique<NetworkModel>(dims, 0);
      m->load_weights(j);
      return m;
    }
    throw InvalidInputError("model: unknown kind '" + kind + "'");
  } catch (const json::exception &e) {
    throw InvalidInputError(std::string("model: malformed checkpoint: ") +
                            e.what());
  }
}

void save_model(const std::string &path, const Model &model) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("model: cannot write " + path);
  out << model.to_json() << "\n";
}

std::unique_ptr<Model> load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("model: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

Emission emit_lattice(const Model &model, const SyntheticUtterance &utt) {
  const int T = utt.num_frames();
  const int U = utt.num_labels();
  check_labels(utt.labels, model.vocab(), "emit_lattice");

  const TokenGrid z = model.scores(utt);
  Emission e;
  e.lattice = EmissionLattice(T, U);
  e.dist = TokenGrid(T, U + 1, model.vocab());

  const int K = model.vocab();
  std::vector<double> logp(K);
  for (int t = 1; t <= T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double m = z.at(t, u, 0);
      for (int k = 1; k < K; ++k) m = std::max(m, z.at(t, u, k));
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += std::exp(z.at(t, u, k) - m);
      const double lse = m + std::log(s);
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        logp[k] = z.at(t, u, k) - lse;
        e.dist.at(t, u, k) = std::exp(logp[k]);
        total += e.dist.at(t, u, k);
      }
      /* Scores of overflowing magnitude defeat the max-shift: the log-sum
       * absorbs into the maximum and tied tokens each come out with weight
       * one.  Negated comparison so a NaN row fails too.
       */
      if (!(std::fabs(total - 1.0) <= 1e-9)) {
        throw DegenerateLatticeError(
            "emit_lattice: scores at (" + std::to_string(t) + ", " +
            std::to_string(u) + ") are too extreme to normalize");
      }
      e.lattice.blank(t, u) = logp[0];
      if (u < U) e.lattice.label(t, u) = logp[utt.labels[u]];
    }
  }
  return e;
}

}  // namespace translat
