#include "bandit_lab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bandit_lab/amplitude.hpp"

namespace bandit_lab {

namespace {

double log_inverse(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  return std::log(1.0 / delta);
}

// Amplitudes within this distance of [0, 1] are rounding noise of the
// closed-form segment means.
constexpr double kAmplitudeSlack = 1e-12;

double qbme_unreported(OracleHandle& oracle, const EstimatorConfig& config,
                       Rng& rng, Part part) {
  const std::vector<double> upper = segment_boundaries(config);
  const QmeConfig qme_config = QmeConfig::from_delta(qme_budget(config), config.delta);
  double lower = 0.0;
  double estimate = 0.0;
  for (std::size_t l = 0; l < upper.size(); ++l) {
    double amplitude = oracle.part_segment_mean(part, lower, upper[l]) / upper[l];
    if (amplitude < -kAmplitudeSlack || amplitude > 1.0 + kAmplitudeSlack ||
        std::isnan(amplitude)) {
      throw std::domain_error("segment " + std::to_string(l) +
                              " amplitude outside [0, 1]: " +
                              std::to_string(amplitude));
    }
    amplitude = std::clamp(amplitude, 0.0, 1.0);
    const double scaled = qme(amplitude, qme_config, rng, oracle.counter());
    estimate += upper[l] * std::clamp(scaled, 0.0, 1.0);
    lower = upper[l];
  }
  return estimate;
}

}  // namespace

void MomentBound::validate() const {
  if (!(v > 0.0 && v <= 1.0)) {
    throw std::domain_error("moment order v must lie in (0, 1]");
  }
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::domain_error("moment bound u must be positive and finite");
  }
}

void EstimatorConfig::validate() const {
  if (n < 1) {
    throw std::domain_error("estimator n must be >= 1");
  }
  if (!(c > 0.0)) {
    throw std::domain_error("estimator constant c must be positive");
  }
  if (!(truncation > 0.0) || !std::isfinite(truncation)) {
    throw std::domain_error("truncation level B must be positive and finite");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("estimator delta must lie in (0, 1)");
  }
}

double default_truncation(const MomentBound& bound, std::int64_t n, double delta) {
  bound.validate();
  if (n < 1) {
    throw std::domain_error("n must be >= 1");
  }
  const double base = std::sqrt(bound.u) * static_cast<double>(n) / log_inverse(delta);
  return std::pow(base, 2.0 / (1.0 + bound.v));
}

EstimatorConfig make_estimator_config(const MomentBound& bound, std::int64_t n,
                                      double delta, double c) {
  EstimatorConfig config{n, c, default_truncation(bound, n, delta), delta};
  config.validate();
  return config;
}

int top_segment_index(std::int64_t n) {
  int k = 0;
  while ((std::int64_t{1} << k) < n) {
    ++k;
  }
  return k;
}

std::vector<double> segment_boundaries(const EstimatorConfig& config) {
  config.validate();
  const int k = top_segment_index(config.n);
  std::vector<double> upper(static_cast<std::size_t>(k) + 1);
  const double unit = config.truncation / static_cast<double>(config.n);
  for (int l = 0; l < k; ++l) {
    upper[static_cast<std::size_t>(l)] = std::ldexp(unit, l);
  }
  upper.back() = config.truncation;
  return upper;
}

std::int64_t qme_budget(const EstimatorConfig& config) {
  const double t = config.c * static_cast<double>(config.n) *
                   std::sqrt(log_inverse(config.delta));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t)));
}

std::uint64_t declared_budget(const EstimatorConfig& config) {
  const double budget = config.c * static_cast<double>(config.n) *
                        std::pow(log_inverse(config.delta), 1.5);
  return static_cast<std::uint64_t>(std::ceil(budget));
}

std::uint64_t qbme_queries(const EstimatorConfig& config) {
  const auto segments = static_cast<std::uint64_t>(top_segment_index(config.n)) + 1;
  return segments * static_cast<std::uint64_t>(median_repeats(config.delta)) *
         static_cast<std::uint64_t>(qme_budget(config));
}

double qbme(OracleHandle& oracle, const EstimatorConfig& config, Rng& rng,
            Part part) {
  config.validate();
  oracle.counter().declare(declared_budget(config));
  return qbme_unreported(oracle, config, rng, part);
}

double qtme(OracleHandle& oracle, const EstimatorConfig& config, Rng& rng) {
  config.validate();
  oracle.counter().declare(declared_budget(config));
  const double positive = qbme_unreported(oracle, config, rng, Part::positive);
  const double negative = qbme_unreported(oracle, config, rng, Part::negative);
  return positive - negative;
}

TruncatedMeanAccumulator::TruncatedMeanAccumulator(const MomentBound& bound,
                                                   double delta)
    : bound_(bound), log_term_(log_inverse(delta)) {
  bound_.validate();
  threshold_scale_ = bound_.u / log_term_;
}

void TruncatedMeanAccumulator::add(double sample) {
  ++count_;
  const double threshold =
      std::pow(threshold_scale_ * static_cast<double>(count_), 1.0 / (1.0 + bound_.v));
  if (std::abs(sample) <= threshold) {
    sum_ += sample;
  }
}

double TruncatedMeanAccumulator::estimate() const {
  if (count_ == 0) {
    throw std::logic_error("truncated mean of zero samples");
  }
  return sum_ / static_cast<double>(count_);
}

double TruncatedMeanAccumulator::radius() const {
  if (count_ == 0) {
    throw std::logic_error("truncated mean of zero samples");
  }
  const double order = 1.0 + bound_.v;
  return 4.0 * std::pow(bound_.u, 1.0 / order) *
         std::pow(log_term_ / static_cast<double>(count_), bound_.v / order);
}

TruncatedMean classical_truncated_mean(std::span<const double> samples,
                                       const MomentBound& bound, double delta) {
  if (samples.empty()) {
    throw std::invalid_argument("classical_truncated_mean needs samples");
  }
  TruncatedMeanAccumulator acc(bound, delta);
  for (double x : samples) {
    acc.add(x);
  }
  return acc.result();
}

}  // namespace bandit_lab
