// core/src/verify.cc
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#include "translat/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "translat/brute_force.h"
#include "translat/errors.h"
#include "translat/forward_backward.h"
#include "translat/lattice.h"
#include "translat/latency.h"
#include "translat/log_math.h"
#include "translat/restriction.h"
#include "translat/rng.h"

namespace translat {

namespace {

constexpr double kEquivalenceTol = 1e-9;
constexpr double kDifferenceRelTol = 1e-5;
constexpr double kDifferenceAbsFloor = 1e-8;
constexpr double kDifferenceStep = 1e-6;

struct Context {
  const VerifyOptions &options;
  VerifyReport &report;
  const EmissionLattice *current = nullptr;

  VerifyCheck *check = nullptr;

  void begin(const std::string &name) {
    report.checks.push_back(VerifyCheck{name, 0, 0, 0.0, ""});
    check = &report.checks.back();
  }

  void expect(bool ok, double err, const std::string &detail) {
    ++check->cases;
    check->worst = std::max(check->worst, err);
    if (ok) return;
    ++check->failures;
    if (check->first_failure.empty()) {
      check->first_failure = detail;
      if (report.replay_path.empty() && current != nullptr &&
          !options.replay_path.empty()) {
        save_lattice(options.replay_path, *current);
        report.replay_path = options.replay_path;
      }
    }
  }
};

bool close_rel(double a, double b, double rel, double floor, double *err) {
  const double diff = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  *err = diff;
  return diff <= std::max(floor, rel * scale);
}

// Cycles through every (T, U) shape, one fresh lattice per case.
EmissionLattice next_lattice(int case_index, int max_t, int max_u,
                             std::mt19937_64 &rng) {
  const int shapes = max_t * (max_u + 1);
  const int shape = case_index % shapes;
  const int T = shape / (max_u + 1) + 1;
  const int U = shape % (max_u + 1);
  return random_lattice(T, U, rng);
}

// Deterministic reference times for a lattice of this shape.
ReferenceAlignment random_reference(int T, int U, std::mt19937_64 &rng) {
  ReferenceAlignment ref;
  std::uniform_int_distribution<int> frame(1, T);
  for (int u = 0; u < U; ++u) ref.label_times.push_back(frame(rng));
  std::sort(ref.label_times.begin(), ref.label_times.end());
  ref.eos_frame = T;
  return ref;
}

// The negative control: one backward entry nudged off its recursion value.
void maybe_perturb(const VerifyOptions &options, FBTables *fb) {
  if (!options.perturb_beta) return;
  fb->log_beta.at(fb->T / 2, fb->U / 2) += 0.1;
}

std::string cell_detail(const char *what, int T, int U, double got,
                        double want) {
  std::ostringstream msg;
  msg << what << " (T=" << T << ", U=" << U << "): got " << got << ", want "
      << want;
  return msg.str();
}

}  // namespace

VerifyReport run_verification(const VerifyOptions &options) {
  if (options.max_t < 1 || options.max_u < 0 || options.cases < 1 ||
      options.grad_cases < 0) {
    throw InvalidInputError("verify: malformed options");
  }
  VerifyReport report;
  Context ctx{options, report};

  std::mt19937_64 rng = make_rng(options.seed, 0x76657269ull);

  // Likelihood equals the exhaustive path sum.
  ctx.begin("likelihood-vs-enumeration");
  for (int i = 0; i < options.cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    const auto paths = enumerate_alignments(lat.T, lat.U);
    const double want = std::log(brute_force_likelihood(lat, paths));
    const double got = transducer_loss(lat).fb.log_likelihood;
    double err;
    const bool ok = close_rel(got, want, 0.0, kEquivalenceTol, &err);
    ctx.expect(ok, err, cell_detail("likelihood", lat.T, lat.U, got, want));
  }

  // Forward and backward meet in the middle: alpha-side total equals
  // beta-side total, and every anti-diagonal reproduces the likelihood.
  ctx.begin("diagonal-identity");
  for (int i = 0; i < options.cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    FBTables fb = forward_backward(lat);
    maybe_perturb(options, &fb);
    double err;
    bool ok = close_rel(fb.beta(1, 0), fb.log_likelihood, kEquivalenceTol,
                        kEquivalenceTol, &err);
    ctx.expect(ok, err,
               cell_detail("beta(1,0)", lat.T, lat.U, fb.beta(1, 0),
                           fb.log_likelihood));
    for (int n = 1; n <= lat.T + lat.U + 1; ++n) {
      double acc = kLogZero;
      for (const DiagonalCell &c : diagonal_posteriors(fb, n)) {
        // Re-add in log space: posterior = exp(alpha + beta - ll).
        acc = log_add(acc, std::log(c.posterior) + fb.log_likelihood);
      }
      ok = close_rel(acc, fb.log_likelihood, kEquivalenceTol, kEquivalenceTol,
                     &err);
      std::ostringstream what;
      what << "diagonal " << n;
      ctx.expect(ok, err,
                 cell_detail(what.str().c_str(), lat.T, lat.U, acc,
                             fb.log_likelihood));
    }
  }

  // Posterior weights of each diagonal form a distribution.
  ctx.begin("posterior-normalization");
  for (int i = 0; i < options.cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    FBTables fb = forward_backward(lat);
    maybe_perturb(options, &fb);
    for (int n = 1; n <= lat.T + lat.U + 1; ++n) {
      double sum = 0.0;
      for (const DiagonalCell &c : diagonal_posteriors(fb, n)) sum += c.posterior;
      double err;
      const bool ok = close_rel(sum, 1.0, 0.0, kEquivalenceTol, &err);
      ctx.expect(ok, err, cell_detail("posterior sum", lat.T, lat.U, sum, 1.0));
    }
  }

  // Masked likelihood equals the exhaustive sum over surviving paths.
  ctx.begin("masked-likelihood-vs-enumeration");
  for (int i = 0; i < options.cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    if (lat.T < 2) continue;
    ctx.current = &lat;
    const ReferenceAlignment ref = random_reference(lat.T, lat.U, rng);
    std::uniform_int_distribution<int> left_draw(1, lat.T);
    std::uniform_int_distribution<int> right_draw(1, lat.T);
    MaskField masks;
    try {
      masks = build_masks(ref, left_draw(rng), right_draw(rng), lat.T, lat.U);
    } catch (const OverRestrictionError &) {
      continue;  // buffers too tight for this draw; feasibility is its own test
    }
    const auto paths = enumerate_alignments(lat.T, lat.U);
    const double want = std::log(brute_force_likelihood(lat, paths, &masks));
    const double got = masked_loss(lat, masks).fb.log_likelihood;
    double err;
    const bool ok = close_rel(got, want, 0.0, kEquivalenceTol, &err);
    ctx.expect(ok, err, cell_detail("masked likelihood", lat.T, lat.U, got, want));
  }

  // Expected delays per diagonal match the exhaustive definition.
  ctx.begin("expected-delay-vs-enumeration");
  for (int i = 0; i < options.cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    const ReferenceAlignment ref = random_reference(lat.T, lat.U, rng);
    const DelayField delays = delay_matrix(
        diagonal_reference_times(ref, lat.T, lat.U), lat.T, lat.U);
    FBTables fb = forward_backward(lat);
    const ExpectedDelays expected = expected_delays(fb, delays);
    const auto paths = enumerate_alignments(lat.T, lat.U);
    for (int n = 1; n <= lat.T + lat.U + 1; ++n) {
      const double want = brute_force_expected_delay(lat, paths, delays, n);
      double err;
      const bool ok = close_rel(expected.at(n), want, 0.0, kEquivalenceTol, &err);
      ctx.expect(ok, err,
                 cell_detail("expected delay", lat.T, lat.U, expected.at(n), want));
    }
  }

  // Analytic loss gradients against central differences of the loss.
  ctx.begin("loss-gradient-vs-difference");
  auto loss_fn = [](const EmissionLattice &l) { return transducer_loss(l).loss; };
  for (int i = 0; i < options.grad_cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    const LossResult r = transducer_loss(lat);
    const GradientField g = loss_gradients(r.fb, lat);
    for (int t = 1; t <= lat.T; ++t) {
      for (int u = 0; u <= lat.U; ++u) {
        if (u < lat.U) {
          const double fd = central_difference(loss_fn, lat, t, u,
                                               EntryKind::kLabel, kDifferenceStep);
          double err;
          const bool ok = close_rel(g.label(t, u), fd, kDifferenceRelTol,
                                    kDifferenceAbsFloor, &err);
          ctx.expect(ok, err, cell_detail("label grad", lat.T, lat.U,
                                          g.label(t, u), fd));
        }
        const double fd = central_difference(loss_fn, lat, t, u,
                                             EntryKind::kBlank, kDifferenceStep);
        double err;
        const bool ok = close_rel(g.blank(t, u), fd, kDifferenceRelTol,
                                  kDifferenceAbsFloor, &err);
        ctx.expect(ok, err,
                   cell_detail("blank grad", lat.T, lat.U, g.blank(t, u), fd));
      }
    }
  }

  // Analytic expected-delay gradients against central differences of the
  // successor diagonal's expected delay.
  ctx.begin("delay-gradient-vs-difference");
  for (int i = 0; i < options.grad_cases; ++i) {
    EmissionLattice lat = next_lattice(i, options.max_t, options.max_u, rng);
    ctx.current = &lat;
    const ReferenceAlignment ref = random_reference(lat.T, lat.U, rng);
    const DelayField delays = delay_matrix(
        diagonal_reference_times(ref, lat.T, lat.U), lat.T, lat.U);
    FBTables fb = forward_backward(lat);
    const ExpectedDelays expected = expected_delays(fb, delays);
    const GradientField g = expected_delay_gradients(fb, delays, expected);
    for (int t = 1; t <= lat.T; ++t) {
      for (int u = 0; u <= lat.U; ++u) {
        const int n = t + u + 1;
        auto delay_fn = [&](const EmissionLattice &l) {
          FBTables tables = forward_backward(l);
          return expected_delays(tables, delays).at(n);
        };
        if (u < lat.U) {
          const double fd = central_difference(delay_fn, lat, t, u,
                                               EntryKind::kLabel, kDifferenceStep);
          double err;
          const bool ok = close_rel(g.label(t, u), fd, kDifferenceRelTol,
                                    kDifferenceAbsFloor, &err);
          ctx.expect(ok, err, cell_detail("label delay grad", lat.T, lat.U,
                                          g.label(t, u), fd));
        }
        const double fd = central_difference(delay_fn, lat, t, u,
                                             EntryKind::kBlank, kDifferenceStep);
        double err;
        const bool ok = close_rel(g.blank(t, u), fd, kDifferenceRelTol,
                                  kDifferenceAbsFloor, &err);
        ctx.expect(ok, err, cell_detail("blank delay grad", lat.T, lat.U,
                                        g.blank(t, u), fd));
      }
    }
  }

  return report;
}

std::string format_report(const VerifyReport &report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-36s %8s %9s %12s  %s\n", "check",
                "cases", "failures", "worst", "status");
  out << line;
  int failures = 0;
  for (const VerifyCheck &c : report.checks) {
    failures += c.failures;
    std::snprintf(line, sizeof(line), "%-36s %8d %9d %12.3e  %s\n",
                  c.name.c_str(), c.cases, c.failures, c.worst,
                  c.failures == 0 ? "PASS" : "FAIL");
    out << line;
    if (c.failures > 0) out << "  first failure: " << c.first_failure << "\n";
  }
  out << (report.ok() ? "VERIFY: PASS" : "VERIFY: FAIL");
  out << " (" << report.checks.size() << " checks, " << failures
      << " failing cases)";
  if (!report.replay_path.empty()) {
    out << "\nfirst failing lattice written to " << report.replay_path;
  }
  out << "\n";
  return out.str();
}

}  // namespace translat
