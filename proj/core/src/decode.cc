// core/src/decode.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "translat/errors.h"
#include "translat/log_math.h"

namespace translat {

using nlohmann::json;

DecodeResult greedy_decode(const Model &model, const SyntheticUtterance &utt) {
  const int T = utt.num_frames();
  const int cap = 2 * T;  // emission cap; keeps the loop terminating
  DecodeResult r;
  int t = 1;
  while (t <= T) {
    const std::vector<double> z =
        model.decode_scores(utt, t, r.tokens);
    int best = 1;
    for (int k = 2; k < static_cast<int>(z.size()); ++k) {
      if (z[k] > z[best]) best = k;
    }
    // Ties go to blank.
    if (z[best] > z[0] && static_cast<int>(r.tokens.size()) < cap) {
      r.tokens.push_back(best);
      r.emission_frames.push_back(t);
    } else {
      ++t;
    }
  }
  return r;
}

namespace {

struct Hyp {
  std::vector<int> tokens;
  std::vector<int> frames;
  double log_sum = kLogZero;   // summed over merged alignment branches
  double rep_log = kLogZero;   // score of the branch that owns `frames`
};

// Score-descending; equal scores prefer the shorter, then lexicographically
// smaller token sequence, so pruning and output order are deterministic.
bool better(const Hyp &a, const Hyp &b) {
  if (a.log_sum != b.log_sum) return a.log_sum > b.log_sum;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  return a.tokens < b.tokens;
}

void prune(std::vector<Hyp> *hyps, int beam_size) {
  std::sort(hyps->begin(), hyps->end(), better);
  if (static_cast<int>(hyps->size()) > beam_size) hyps->resize(beam_size);
}

std::vector<double> log_softmax(std::vector<double> z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  const double lse = m + std::log(s);
  for (double &v : z) v -= lse;
  return z;
}

}  // namespace

std::vector<BeamHypothesis> beam_search(const Model &model,
                                        const SyntheticUtterance &utt,
                                        int beam_size) {
  if (beam_size < 1) throw InvalidInputError("beam_search: beam_size must be >= 1");
  const int T = utt.num_frames();
  const int cap = 2 * T;

  std::vector<Hyp> beam(1);
  beam[0].tokens = {};
  beam[0].log_sum = 0.0;
  beam[0].rep_log = 0.0;

  for (int t = 1; t <= T; ++t) {
    // Hypotheses that already took the blank into frame t+1, merged by prefix.
    std::map<std::vector<int>, Hyp> settled;
    auto settle = [&](const Hyp &h, double blank_logp) {
      Hyp moved = h;
      moved.log_sum += blank_logp;
      moved.rep_log += blank_logp;
      auto [it, inserted] = settled.try_emplace(moved.tokens, moved);
      if (!inserted) {
        Hyp &e = it->second;
        e.log_sum = log_add(e.log_sum, moved.log_sum);
        if (moved.rep_log > e.rep_log) {
          e.rep_log = moved.rep_log;
          e.frames = moved.frames;
        }
      }
    };

    // Each round emits one more label at frame t; a hypothesis leaves the
    // frontier through its blank extension.  The cap bounds the rounds.
    std::vector<Hyp> frontier = std::move(beam);
    while (!frontier.empty()) {
      std::vector<Hyp> extended;
      for (const Hyp &h : frontier) {
        const std::vector<double> logp =
            log_softmax(model.decode_scores(utt, t, h.tokens));
        settle(h, logp[0]);
        if (static_cast<int>(h.tokens.size()) >= cap) continue;
        for (int k = 1; k < static_cast<int>(logp.size()); ++k) {
          Hyp ext = h;
          ext.tokens.push_back(k);
          ext.frames.push_back(t);
          ext.log_sum += logp[k];
          ext.rep_log += logp[k];
          extended.push_back(std::move(ext));
        }
      }
      prune(&extended, beam_size);
      frontier = std::move(extended);
    }

    beam.clear();
    beam.reserve(settled.size());
    for (auto &[tokens, h] : settled) beam.push_back(std::move(h));
    prune(&beam, beam_size);
  }

  std::vector<BeamHypothesis> out;
  out.reserve(beam.size());
  for (const Hyp &h : beam) {
    out.push_back(BeamHypothesis{h.tokens, h.frames, h.log_sum});
  }
  return out;
}

int edit_distance(const std::vector<int> &a, const std::vector<int> &b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double token_error_rate(const std::vector<DecodeResult> &results,
                        const std::vector<SyntheticUtterance> &corpus) {
  if (results.size() != corpus.size()) {
    throw InvalidInputError("token_error_rate: result/corpus size mismatch");
  }
  long long edits = 0;
  long long total = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    edits += edit_distance(results[i].tokens, corpus[i].labels);
    total += corpus[i].labels.size();
  }
  if (total == 0) throw InvalidInputError("token_error_rate: empty references");
  return static_cast<double>(edits) / static_cast<double>(total);
}

double mean_signed_token_delay(const std::vector<DecodeResult> &results,
                               const std::vector<SyntheticUtterance> &corpus) {
  if (results.size() != corpus.size()) {
    throw InvalidInputError("token delay: result/corpus size mismatch");
  }
  long long count = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto &frames = results[i].emission_frames;
    const auto &times = corpus[i].reference.label_times;
    const std::size_t matched = std::min(frames.size(), times.size());
    for (std::size_t j = 0; j < matched; ++j) {
      sum += static_cast<double>(frames[j] - times[j]);
      ++count;
    }
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(count);
}

namespace {

double nearest_rank(const std::vector<double> &sorted, double p) {
  // Smallest value with at least p of the mass at or below it.
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

}  // namespace

LatencyReport pr_latency(const std::vector<DecodeResult> &results,
                         const std::vector<SyntheticUtterance> &corpus,
                         double frame_period_ms) {
  if (results.size() != corpus.size()) {
    throw InvalidInputError("pr_latency: result/corpus size mismatch");
  }
  if (results.empty()) throw InvalidInputError("pr_latency: no results");
  if (frame_period_ms <= 0.0) {
    throw InvalidInputError("pr_latency: frame period must be positive");
  }

  LatencyReport report;
  std::vector<double> latencies;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].emission_frames.empty()) {
      ++report.empty_hypotheses;
      continue;
    }
    const int frames =
        results[i].emission_frames.back() - corpus[i].reference.eos_frame;
    const double ms = frames * frame_period_ms;
    report.per_utterance.push_back(UtteranceLatency{corpus[i].id, frames, ms});
    latencies.push_back(ms);
  }
  if (latencies.empty()) {
    report.pr50_ms = std::numeric_limits<double>::quiet_NaN();
    report.pr90_ms = std::numeric_limits<double>::quiet_NaN();
  } else {
    std::sort(latencies.begin(), latencies.end());
    report.pr50_ms = nearest_rank(latencies, 0.5);
    report.pr90_ms = nearest_rank(latencies, 0.9);
  }
  report.mean_token_delay_frames = mean_signed_token_delay(results, corpus);
  return report;
}

std::string decode_results_to_jsonl(const std::vector<DecodeResult> &results,
                                    const std::vector<SyntheticUtterance> &corpus,
                                    double frame_period_ms) {
  if (results.size() != corpus.size()) {
    throw InvalidInputError("decode jsonl: result/corpus size mismatch");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    json j;
    j["utt_id"] = corpus[i].id;
    j["tokens"] = results[i].tokens;
    j["emission_frames"] = results[i].emission_frames;
    if (results[i].emission_frames.empty()) {
      j["latency_frames"] = nullptr;
      j["latency_ms"] = nullptr;
    } else {
      const int frames =
          results[i].emission_frames.back() - corpus[i].reference.eos_frame;
      j["latency_frames"] = frames;
      j["latency_ms"] = frames * frame_period_ms;
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string latency_report_to_json(const LatencyReport &report,
                                   double final_token_error_rate) {
  json j{{"pr50_ms", report.pr50_ms},
         {"pr90_ms", report.pr90_ms},
         {"mean_token_delay_frames", report.mean_token_delay_frames},
         {"empty_hypotheses", report.empty_hypotheses},
         {"final_token_error_rate", final_token_error_rate}};
  json rows = json::array();
  for (const UtteranceLatency &u : report.per_utterance) {
    rows.push_back(json{{"utt_id", u.utt_id},
                        {"latency_frames", u.latency_frames},
                        {"latency_ms", u.latency_ms}});
  }
  j["per_utterance"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace translat
