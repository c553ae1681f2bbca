// core/include/translat/decode.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_DECODE_H_
#define TRANSLAT_DECODE_H_

#include <string>
#include <vector>

#include "translat/model.h"
#include "translat/synthetic.h"

namespace translat {

struct DecodeResult {
  std::vector<int> tokens;
  std::vector<int> emission_frames;  // frame at which tokens[i] was emitted
};

/* Frame-synchronous greedy decoding: at (t, u) emit the argmax token and
 * stay on frame t, or advance to t+1 on blank.  A tie between blank and the
 * best label goes to blank; at most 2T labels are emitted per utterance.
 */
DecodeResult greedy_decode(const Model &model, const SyntheticUtterance &utt);

struct BeamHypothesis {
  std::vector<int> tokens;
  std::vector<int> emission_frames;
  double log_prob = 0.0;  // log of the summed path probability
};

/* Breadth-per-frame beam search.  Hypotheses carrying the same label prefix
 * merge by adding their path sums; the merged hypothesis keeps the emission
 * frames of its highest-scoring alignment branch.  Each frame expands label
 * extensions up to the 2T cap, keeps the top beam_size per round, then takes
 * the blank into the next frame.  Results are sorted by score (ties broken
 * by shorter, then lexicographically smaller token sequence).  With a beam
 * wide enough to hold every prefix the top result is the exact most likely
 * label sequence of length <= 2T.  beam_size == 1 is NOT greedy decoding:
 * scores here sum over alignments.
 */
std::vector<BeamHypothesis> beam_search(const Model &model,
                                        const SyntheticUtterance &utt,
                                        int beam_size);

struct UtteranceLatency {
  std::string utt_id;
  int latency_frames = 0;
  double latency_ms = 0.0;
};

/* Last-token latency report.  Per utterance: (last emission frame -
 * eos_frame) * frame_period_ms.  Utterances that emitted nothing are
 * excluded from the percentiles and counted in empty_hypotheses.
 * Percentiles use the nearest-rank rule on the sorted latencies (the
 * ceil(p*N)-th smallest); with no non-empty hypothesis they are NaN.
 * mean_token_delay_frames averages the signed per-token delay
 * emission_frame - reference_time over position-matched tokens.
 */
struct LatencyReport {
  std::vector<UtteranceLatency> per_utterance;
  double pr50_ms = 0.0;
  double pr90_ms = 0.0;
  double mean_token_delay_frames = 0.0;
  int empty_hypotheses = 0;
};

LatencyReport pr_latency(const std::vector<DecodeResult> &results,
                         const std::vector<SyntheticUtterance> &corpus,
                         double frame_period_ms);

// Levenshtein distance over token sequences.
int edit_distance(const std::vector<int> &a, const std::vector<int> &b);

// Sum of edit distances over the corpus divided by the total reference
// length.
double token_error_rate(const std::vector<DecodeResult> &results,
                        const std::vector<SyntheticUtterance> &corpus);

// Signed mean of emission_frame - reference_time over position-matched
// tokens; NaN when nothing matched.
double mean_signed_token_delay(const std::vector<DecodeResult> &results,
                               const std::vector<SyntheticUtterance> &corpus);

// One JSON object per line: utt_id, tokens, emission_frames, latency_frames,
// latency_ms.
std::string decode_results_to_jsonl(const std::vector<DecodeResult> &results,
                                    const std::vector<SyntheticUtterance> &corpus,
                                    double frame_period_ms);

// The latency.json artifact: the report's scalars, the error rate, and one
// object per utterance.  NaN serializes as null.
std::string latency_report_to_json(const LatencyReport &report,
                                   double final_token_error_rate);

}  // namespace translat

#endif  // TRANSLAT_DECODE_H_
