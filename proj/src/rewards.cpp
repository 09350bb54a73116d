#include "bandit_lab/rewards.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bandit_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_interval(double lo, double hi) {
  if (!(lo < hi)) {
    throw std::domain_error("segment requires lo < hi");
  }
}

// Unshifted Pareto: E[Z 1{lo <= Z < hi}] and P(lo <= Z < hi).
double base_segment_mean(double alpha, double scale, double lo, double hi) {
  const double from = std::max(lo, scale);
  if (hi <= from) {
    return 0.0;
  }
  const double coeff = alpha * std::pow(scale, alpha) / (alpha - 1.0);
  const double upper = std::isinf(hi) ? 0.0 : std::pow(hi, 1.0 - alpha);
  return coeff * (std::pow(from, 1.0 - alpha) - upper);
}

double base_probability(double alpha, double scale, double lo, double hi) {
  const double from = std::max(lo, scale);
  if (hi <= from) {
    return 0.0;
  }
  const double upper = std::isinf(hi) ? 0.0 : std::pow(scale / hi, alpha);
  return std::pow(scale / from, alpha) - upper;
}

// E[|shift + Z|^p] for Z ~ Pareto(alpha, scale), p < alpha. Substituting
// U = r^q with q = alpha / (alpha - p) in the quantile integral
// int_0^1 |shift + scale U^(-1/alpha)|^p dU removes the endpoint
// singularity: the integrand becomes q |scale + shift r^((q-1)/p)|^p.
double pareto_raw_moment(const ParetoModel& model, double p) {
  if (!(p < model.alpha)) {
    throw std::domain_error("raw moment of order p needs alpha > p");
  }
  const double q = model.alpha / (model.alpha - p);
  const double exponent = (q - 1.0) / p;
  auto integrand = [&](double r) {
    return q * std::pow(std::abs(model.scale + model.shift * std::pow(r, exponent)), p);
  };
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned kDepth = 15;
  constexpr double kTol = 1e-10;
  // The integrand has a kink where scale + shift * r^exponent crosses zero.
  if (model.shift < 0.0 && -model.shift > model.scale) {
    const double kink = std::pow(model.scale / -model.shift, 1.0 / exponent);
    return Integrator::integrate(integrand, 0.0, kink, kDepth, kTol) +
           Integrator::integrate(integrand, kink, 1.0, kDepth, kTol);
  }
  return Integrator::integrate(integrand, 0.0, 1.0, kDepth, kTol);
}

}  // namespace

void ParetoModel::validate() const {
  if (!(alpha > 1.0)) {
    throw std::domain_error("Pareto shape alpha must exceed 1");
  }
  if (!(scale > 0.0)) {
    throw std::domain_error("Pareto scale must be positive");
  }
  if (!std::isfinite(shift)) {
    throw std::domain_error("Pareto shift must be finite");
  }
}

void DiscreteModel::validate() const {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("discrete model needs matching, nonempty atoms");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("discrete probabilities must be nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("discrete probabilities must sum to 1");
  }
}

RewardModel::RewardModel(ParetoModel pareto) : law_(pareto) {
  pareto.validate();
}

RewardModel::RewardModel(DiscreteModel discrete) : law_(std::move(discrete)) {
  std::get<DiscreteModel>(law_).validate();
}

RewardModel RewardModel::point_mass(double value) {
  return RewardModel(DiscreteModel{{value}, {1.0}});
}

RewardModel RewardModel::two_point(double low, double high, double p_high) {
  return RewardModel(DiscreteModel{{low, high}, {1.0 - p_high, p_high}});
}

double RewardModel::mean() const {
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    return pareto_mean(*pareto);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  return std::inner_product(d.values.begin(), d.values.end(),
                            d.probabilities.begin(), 0.0);
}

double RewardModel::segment_mean(double lo, double hi) const {
  check_interval(lo, hi);
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    return bandit_lab::segment_mean(*pareto, lo, hi);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (lo <= d.values[i] && d.values[i] < hi) {
      total += d.values[i] * d.probabilities[i];
    }
  }
  return total;
}

double RewardModel::probability(double lo, double hi) const {
  check_interval(lo, hi);
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    return base_probability(pareto->alpha, pareto->scale, lo - pareto->shift,
                            hi - pareto->shift);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (lo <= d.values[i] && d.values[i] < hi) {
      total += d.probabilities[i];
    }
  }
  return total;
}

double RewardModel::negative_segment_mean(double lo, double hi) const {
  check_interval(lo, hi);
  if (lo < 0.0) {
    throw std::domain_error("negative-part segments start at lo >= 0");
  }
  if (std::holds_alternative<ParetoModel>(law_)) {
    // Continuous law: boundary atoms carry no mass.
    return -segment_mean(-hi, -lo);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    const double y = -d.values[i];
    if (d.values[i] < 0.0 && lo <= y && y < hi) {
      total += y * d.probabilities[i];
    }
  }
  return total;
}

double RewardModel::raw_moment(double p) const {
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    return pareto_raw_moment(*pareto, p);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    total += std::pow(std::abs(d.values[i]), p) * d.probabilities[i];
  }
  return total;
}

double RewardModel::sample(Rng& rng) const {
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    return bandit_lab::sample(*pareto, rng);
  }
  const auto& d = std::get<DiscreteModel>(law_);
  if (d.values.size() == 1) {
    return d.values.front();
  }
  const double u = uniform_open_closed(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    cumulative += d.probabilities[i];
    if (u <= cumulative) {
      return d.values[i];
    }
  }
  return d.values.back();
}

RewardModel RewardModel::translated(double offset) const {
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    ParetoModel moved = *pareto;
    moved.shift += offset;
    return RewardModel(moved);
  }
  DiscreteModel moved = std::get<DiscreteModel>(law_);
  for (double& value : moved.values) {
    value += offset;
  }
  return RewardModel(std::move(moved));
}

std::string RewardModel::describe() const {
  std::ostringstream out;
  if (const auto* pareto = std::get_if<ParetoModel>(&law_)) {
    out << "Pareto(alpha=" << pareto->alpha << ", scale=" << pareto->scale
        << ", shift=" << pareto->shift << ")";
  } else {
    const auto& d = std::get<DiscreteModel>(law_);
    out << "Discrete(" << d.values.size() << " atoms)";
  }
  return out.str();
}

double pareto_mean(const ParetoModel& model) {
  model.validate();
  return model.shift + model.alpha * model.scale / (model.alpha - 1.0);
}

double segment_mean(const ParetoModel& model, double lo, double hi) {
  check_interval(lo, hi);
  // X = shift + Z: E[X 1{.}] = E[Z 1{.}] + shift * P(.).
  const double zlo = lo - model.shift;
  const double zhi = hi - model.shift;
  double value = base_segment_mean(model.alpha, model.scale, zlo, zhi);
  if (model.shift != 0.0) {
    value += model.shift * base_probability(model.alpha, model.scale, zlo, zhi);
  }
  return value;
}

double segment_mean(const RewardModel& model, double lo, double hi) {
  return model.segment_mean(lo, hi);
}

double u_bound(const ParetoModel& model, double v) {
  model.validate();
  const double order = 1.0 + v;
  if (!(model.alpha > order)) {
    throw std::domain_error("u_bound needs alpha > 1 + v");
  }
  if (model.shift != 0.0) {
    throw std::domain_error("u_bound applies to unshifted Pareto models");
  }
  return model.alpha * std::pow(model.scale, order) / (model.alpha - order);
}

double pareto_quantile(const ParetoModel& model, double uniform) {
  return model.shift + model.scale * std::pow(uniform, -1.0 / model.alpha);
}

double sample(const ParetoModel& model, Rng& rng) {
  return pareto_quantile(model, uniform_open_closed(rng));
}

double sample(const RewardModel& model, Rng& rng) { return model.sample(rng); }

double OracleHandle::part_segment_mean(Part part, double lo, double hi) const {
  if (part == Part::positive) {
    // Y = X 1{X >= 0}; for lo >= 0 the event {lo <= Y < hi} only adds
    // zero-valued outcomes beyond {lo <= X < hi}.
    return model_.segment_mean(std::max(lo, 0.0), hi);
  }
  return model_.negative_segment_mean(lo, hi);
}

}  // namespace bandit_lab
