#include "bandit_lab/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bandit_lab {

namespace {

constexpr double kPi = std::numbers::pi;

// Fejer-kernel mass for an offset x = M * d between an outcome and the
// (real-valued) center M * theta / pi. Periodic in x with period M.
double fejer_mass(double offset, double m) {
  const double denom = std::sin(kPi * offset / m);
  if (std::abs(denom) < 1e-150) {
    return 1.0;
  }
  const double numer = std::sin(kPi * offset);
  return (numer * numer) / (m * m * denom * denom);
}

// theta_a / pi, in [0, 1/2].
double phase_fraction(double amplitude) {
  return std::asin(std::sqrt(amplitude)) / kPi;
}

}  // namespace

void AmplitudeQuery::validate() const {
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw std::domain_error("amplitude must lie in [0, 1], got " +
                            std::to_string(amplitude));
  }
  if (grover_count < 1) {
    throw std::domain_error("grover_count must be >= 1");
  }
}

int median_repeats(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  return 2 * static_cast<int>(std::ceil(std::log2(1.0 / delta))) + 1;
}

QmeConfig QmeConfig::from_delta(std::int64_t t, double delta) {
  QmeConfig config{t, delta, median_repeats(delta)};
  config.validate();
  return config;
}

void QmeConfig::validate() const {
  if (t < 1) {
    throw std::domain_error("QME budget t must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("QME delta must lie in (0, 1)");
  }
  if (repeats < 1 || repeats % 2 == 0) {
    throw std::domain_error("QME repeats must be odd and >= 1");
  }
}

std::vector<double> ae_pmf(double amplitude, std::int64_t grover_count) {
  AmplitudeQuery{amplitude, grover_count}.validate();
  const double m = static_cast<double>(grover_count);
  const double phase = phase_fraction(amplitude);
  std::vector<double> pmf(static_cast<std::size_t>(grover_count));
  for (std::int64_t y = 0; y < grover_count; ++y) {
    double d = static_cast<double>(y) / m - phase;
    d -= std::ceil(d - 0.5);  // into (-1/2, 1/2]
    pmf[static_cast<std::size_t>(y)] = fejer_mass(m * d, m);
  }
  return pmf;
}

double ae_estimate(std::int64_t outcome, std::int64_t grover_count) {
  const double s = std::sin(kPi * static_cast<double>(outcome) /
                            static_cast<double>(grover_count));
  return s * s;
}

std::int64_t ae_sample_outcome(const AmplitudeQuery& query, Rng& rng,
                               QueryCounter& counter) {
  query.validate();
  const std::int64_t m = query.grover_count;
  counter.charge(static_cast<std::uint64_t>(m));

  const double md = static_cast<double>(m);
  const double center = md * phase_fraction(query.amplitude);
  const double mode = std::round(center);
  const double gap = center - mode;  // in [-1/2, 1/2]
  const auto mode_index = static_cast<std::int64_t>(mode);

  // Offsets j = 0, +1, -1, +2, -2, ... visit M consecutive integers, hence
  // every residue mod M exactly once.
  const double u = uniform_open_closed(rng);
  double cumulative = 0.0;
  for (std::int64_t step = 0; step < m; ++step) {
    const std::int64_t j = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
    cumulative += fejer_mass(static_cast<double>(j) - gap, md);
    if (u <= cumulative) {
      return ((mode_index + j) % m + m) % m;
    }
  }
  // Rounding deficit of the total mass goes to the mode.
  return (mode_index % m + m) % m;
}

double ae_sample(const AmplitudeQuery& query, Rng& rng, QueryCounter& counter) {
  return ae_estimate(ae_sample_outcome(query, rng, counter),
                     query.grover_count);
}

double qme(double amplitude, const QmeConfig& config, Rng& rng,
           QueryCounter& counter) {
  config.validate();
  const AmplitudeQuery query{amplitude, config.t};
  query.validate();
  std::vector<double> draws(static_cast<std::size_t>(config.repeats));
  for (auto& draw : draws) {
    draw = ae_sample(query, rng, counter);
  }
  const auto mid = draws.begin() + config.repeats / 2;
  std::nth_element(draws.begin(), mid, draws.end());
  return *mid;
}

double qme_error_bound(double amplitude, std::int64_t t, double delta,
                       double constant) {
  const double log_term = std::log(1.0 / delta);
  const double td = static_cast<double>(t);
  return constant * (std::sqrt(amplitude) * log_term / td +
                     log_term * log_term / (td * td));
}

}  // namespace bandit_lab
