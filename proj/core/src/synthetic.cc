// core/src/synthetic.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/synthetic.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/rng.h"

namespace translat {

using nlohmann::json;

namespace {

// Selection sampling (one uniform draw per candidate): k sorted distinct
// values from 1..n.  Deterministic for a given engine state.
std::vector<int> sample_sorted_distinct(std::mt19937_64 &rng, int n, int k) {
  std::vector<int> out;
  out.reserve(k);
  int needed = k;
  for (int i = 1; i <= n && needed > 0; ++i) {
    const int remaining = n - i + 1;
    std::uniform_int_distribution<int> pick(0, remaining - 1);
    if (pick(rng) < needed) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

}  // namespace

std::vector<SyntheticUtterance> generate_corpus(const CorpusConfig &config) {
  if (config.count < 1) {
    throw InvalidInputError("corpus: count must be >= 1");
  }
  if (config.vocab < 1) {
    throw InvalidInputError("corpus: vocab must be >= 1");
  }
  if (config.noise < 0.0) {
    throw InvalidInputError("corpus: noise must be >= 0");
  }
  if (config.silence_frames < 0) {
    throw InvalidInputError("corpus: silence_frames must be >= 0");
  }
  if (config.t_min < 2 || config.t_max < config.t_min || config.u_min < 1 ||
      config.u_max < config.u_min) {
    throw InvalidInputError("corpus: malformed T/U ranges");
  }
  // Worst case must leave one speech frame per token and keep U < T.
  if (config.u_max + config.silence_frames >= config.t_min) {
    throw InvalidInputError(
        "corpus: infeasible ranges; need u_max + silence_frames < t_min");
  }

  const int dim = config.vocab + 1;
  std::vector<SyntheticUtterance> corpus;
  corpus.reserve(config.count);
  for (int i = 0; i < config.count; ++i) {
    std::mt19937_64 rng = make_rng(config.seed, static_cast<std::uint64_t>(i));

    SyntheticUtterance utt;
    {
      std::ostringstream id;
      id << "utt-" << std::setw(5) << std::setfill('0') << i;
      utt.id = id.str();
    }

    std::uniform_int_distribution<int> t_draw(config.t_min, config.t_max);
    std::uniform_int_distribution<int> u_draw(config.u_min, config.u_max);
    const int T = t_draw(rng);
    const int U = u_draw(rng);
    const int speech = T - config.silence_frames;

    std::uniform_int_distribution<int> token_draw(1, config.vocab);
    for (int u = 0; u < U; ++u) utt.labels.push_back(token_draw(rng));

    // Span boundaries: 0 = b_0 < b_1 < ... < b_U = speech; span u covers
    // frames b_{u-1}+1 .. b_u and its reference time is its first frame.
    std::vector<int> bounds = sample_sorted_distinct(rng, speech - 1, U - 1);
    bounds.insert(bounds.begin(), 0);
    bounds.push_back(speech);
    for (int u = 1; u <= U; ++u) {
      utt.reference.label_times.push_back(bounds[u - 1] + 1);
    }
    utt.reference.eos_frame = speech;

    std::uniform_real_distribution<double> noise_draw(-config.noise,
                                                      config.noise);
    utt.features.assign(T, std::vector<double>(dim, 0.0));
    int span = 1;
    for (int t = 1; t <= T; ++t) {
      int hot = 0;  // silence
      if (t <= speech) {
        while (bounds[span] < t) ++span;
        hot = utt.labels[span - 1];
      }
      utt.features[t - 1][hot] = 1.0;
      for (int d = 0; d < dim; ++d) utt.features[t - 1][d] += noise_draw(rng);
    }
    corpus.push_back(std::move(utt));
  }
  return corpus;
}

std::string utterance_to_json(const SyntheticUtterance &utt) {
  json j{{"id", utt.id},
         {"features", utt.features},
         {"labels", utt.labels},
         {"reference",
          {{"label_times", utt.reference.label_times},
           {"eos_frame", utt.reference.eos_frame}}}};
  return j.dump();
}

SyntheticUtterance utterance_from_json(const std::string &line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error &e) {
    throw InvalidInputError(std::string("utterance: unparseable JSON: ") +
                            e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("features") ||
      !j.contains("labels") || !j.contains("reference")) {
    throw InvalidInputError(
        "utterance: expected id, features, labels, reference");
  }
  SyntheticUtterance utt;
  try {
    utt.id = j["id"].get<std::string>();
    utt.features = j["features"].get<std::vector<std::vector<double>>>();
    utt.labels = j["labels"].get<std::vector<int>>();
    utt.reference.label_times =
        j["reference"]["label_times"].get<std::vector<int>>();
    utt.reference.eos_frame = j["reference"]["eos_frame"].get<int>();
  } catch (const json::exception &e) {
    throw InvalidInputError(std::string("utterance: malformed field: ") +
                            e.what());
  }
  if (utt.features.empty()) {
    throw InvalidInputError("utterance: needs at least one frame");
  }
  const std::size_t dim = utt.features.front().size();
  for (const auto &f : utt.features) {
    if (f.size() != dim) {
      throw InvalidInputError("utterance: ragged feature rows");
    }
  }
  if (utt.labels.size() != utt.reference.label_times.size()) {
    throw InvalidInputError(
        "utterance: labels and reference label_times disagree in length");
  }
  return utt;
}

void save_corpus(const std::string &path,
                 const std::vector<SyntheticUtterance> &corpus) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("corpus: cannot write " + path);
  for (const auto &utt : corpus) out << utterance_to_json(utt) << "\n";
}

std::vector<SyntheticUtterance> load_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("corpus: cannot open " + path);
  std::vector<SyntheticUtterance> corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    corpus.push_back(utterance_from_json(line));
  }
  if (corpus.empty()) throw InvalidInputError("corpus: no utterances in " + path);
  return corpus;
}

}  // namespace translat
