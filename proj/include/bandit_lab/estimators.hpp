#pragma once

// Heavy-tailed mean estimation: the segmented quantum basic mean estimator
// (QBME), its signed extension (QTME), and the classical truncated empirical
// mean used by the robust-UCB baseline. All logarithms are natural.

#include <cstdint>
#include <span>
#include <vector>

#include "bandit_lab/rewards.hpp"
#include "bandit_lab/rng.hpp"

namespace bandit_lab {

/// E|X|^(1+v) <= u.
struct MomentBound {
  double v = 1.0;
  double u = 1.0;

  void validate() const;
};

struct EstimatorConfig {
  std::int64_t n = 1;
  double c = 1.0;
  double truncation = 1.0;  // B
  double delta = 0.05;

  void validate() const;
};

/// B = (sqrt(u) n / log(1/delta))^(2/(1+v)).
double default_truncation(const MomentBound& bound, std::int64_t n, double delta);

/// EstimatorConfig with B = default_truncation(bound, n, delta).
EstimatorConfig make_estimator_config(const MomentBound& bound, std::int64_t n,
                                      double delta, double c = 1.0);

/// Index of the top segment, ceil(log2 n); segments are 0..k.
int top_segment_index(std::int64_t n);

/// Segment upper boundaries a_l = 2^l B / n for l = 0..k, top clamped to B.
std::vector<double> segment_boundaries(const EstimatorConfig& config);

/// Per-segment QME budget t = ceil(c n sqrt(log(1/delta))).
std::int64_t qme_budget(const EstimatorConfig& config);

/// Budget the algorithm declares: c n log^(3/2)(1/delta), rounded up.
std::uint64_t declared_budget(const EstimatorConfig& config);

/// Simulated queries of one QBME call: (k+1) * repeats * t.
std::uint64_t qbme_queries(const EstimatorConfig& config);

/// Estimates E[Y] for the nonnegative part Y of the oracle's variable
/// (Y = X 1{X >= 0} or -X 1{X < 0}) by summing a_l * QME(segment l).
/// Throws std::domain_error if a segment amplitude leaves [0, 1].
double qbme(OracleHandle& oracle, const EstimatorConfig& config, Rng& rng,
            Part part = Part::positive);

/// Signed mean estimate: QBME(Y+) - QBME(Y-). Declares the Algorithm-level
/// budget c n log^(3/2)(1/delta) once per call.
double qtme(OracleHandle& oracle, const EstimatorConfig& config, Rng& rng);

struct TruncatedMean {
  double estimate = 0.0;
  double radius = 0.0;
};

/// (1/s) sum_i X_i 1{|X_i| <= (u i / log(1/delta))^(1/(1+v))} and radius
/// 4 u^(1/(1+v)) (log(1/delta) / s)^(v/(1+v)).
TruncatedMean classical_truncated_mean(std::span<const double> samples,
                                       const MomentBound& bound, double delta);

/// Streaming form of classical_truncated_mean; identical arithmetic.
class TruncatedMeanAccumulator {
 public:
  TruncatedMeanAccumulator(const MomentBound& bound, double delta);

  void add(double sample);
  std::int64_t count() const { return count_; }
  double estimate() const;
  double radius() const;
  TruncatedMean result() const { return {estimate(), radius()}; }

 private:
  MomentBound bound_;
  double log_term_;
  double threshold_scale_;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
};

}  // namespace bandit_lab
