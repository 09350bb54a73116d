#pragma once

// Classical simulation of amplitude estimation (AE) and of the quantum Monte
// Carlo mean estimator built on it. Only the measurement-outcome
// distribution is modeled; no state vectors are simulated.

#include <cstdint>
#include <vector>

#include "bandit_lab/rng.hpp"

namespace bandit_lab {

/// Oracle-query accounting. `actual` counts simulated oracle applications;
/// `declared` counts the budget an algorithm claims to spend. Both only grow.
struct QueryCounter {
  std::uint64_t actual = 0;
  std::uint64_t declared = 0;

  void charge(std::uint64_t queries) { actual += queries; }
  void declare(std::uint64_t queries) { declared += queries; }
};

/// One AE pass on a [0,1]-valued variable with mean `amplitude`, using
/// `grover_count` oracle applications.
struct AmplitudeQuery {
  double amplitude = 0.0;
  std::int64_t grover_count = 1;

  void validate() const;
};

struct QmeConfig {
  std::int64_t t = 1;
  double delta = 0.05;
  int repeats = 1;

  /// Median repetitions derived from delta: 2 * ceil(log2(1/delta)) + 1.
  static QmeConfig from_delta(std::int64_t t, double delta);
  void validate() const;
};

/// Odd repetition count 2 * ceil(log2(1/delta)) + 1 for failure level delta.
int median_repeats(double delta);

/// Measurement distribution of AE over outcomes y = 0..M-1:
/// p[y] = sin^2(M pi d) / (M^2 sin^2(pi d)), d = y/M - asin(sqrt(a))/pi
/// reduced into (-1/2, 1/2], with p[y] = 1 at d = 0.
std::vector<double> ae_pmf(double amplitude, std::int64_t grover_count);

/// Point estimate sin^2(pi y / M) attached to outcome y.
double ae_estimate(std::int64_t outcome, std::int64_t grover_count);

/// Draws one outcome index from ae_pmf. Walks outward from the distribution's
/// mode, so the expected cost is O(log M) instead of O(M). Charges M queries.
std::int64_t ae_sample_outcome(const AmplitudeQuery& query, Rng& rng,
                               QueryCounter& counter);

/// ae_estimate of one sampled outcome.
double ae_sample(const AmplitudeQuery& query, Rng& rng, QueryCounter& counter);

/// Median of `config.repeats` AE passes with M = config.t. Charges
/// repeats * t queries.
double qme(double amplitude, const QmeConfig& config, Rng& rng,
           QueryCounter& counter);

/// Universal constant of the QME error bound for this simulator: the largest
/// per-cell 99th percentile of |estimate - a| / (sqrt(a) log(1/delta) / t +
/// log^2(1/delta) / t^2) over a in {0.05..0.95}, t in {16..256},
/// delta in {0.05, 0.01} (1.2303, rounded up). See tools/calibrate_qme.cpp.
inline constexpr double kQmeErrorConstant = 1.25;

/// C * (sqrt(a) log(1/delta) / t + log^2(1/delta) / t^2).
double qme_error_bound(double amplitude, std::int64_t t, double delta,
                       double constant = kQmeErrorConstant);

}  // namespace bandit_lab
