#pragma once

// Analytic reward models and the query-counted oracle handle that stands in
// for the quantum reward oracle. The oracle exposes exact segment means
// E[X 1{lo <= X < hi}], which is all amplitude estimation needs to know.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bandit_lab/amplitude.hpp"
#include "bandit_lab/rng.hpp"

namespace bandit_lab {

/// Pareto(alpha, scale) translated by `shift`: support [shift + scale, inf).
struct ParetoModel {
  double alpha = 2.0;
  double scale = 1.0;
  double shift = 0.0;

  void validate() const;
};

/// Finite distribution; also used for point masses in test fixtures.
struct DiscreteModel {
  std::vector<double> values;
  std::vector<double> probabilities;

  void validate() const;
};

class RewardModel {
 public:
  RewardModel(ParetoModel pareto);  // NOLINT(google-explicit-constructor)
  RewardModel(DiscreteModel discrete);  // NOLINT(google-explicit-constructor)

  static RewardModel point_mass(double value);
  static RewardModel two_point(double low, double high, double p_high);

  double mean() const;
  /// E[X 1{lo <= X < hi}]; hi may be +infinity.
  double segment_mean(double lo, double hi) const;
  /// P(lo <= X < hi).
  double probability(double lo, double hi) const;
  /// E[Y 1{lo <= Y < hi}] for Y = -X 1{X < 0}, 0 <= lo < hi.
  double negative_segment_mean(double lo, double hi) const;
  /// E[|X|^p], by closed form for discrete models and quadrature otherwise.
  double raw_moment(double p) const;
  double sample(Rng& rng) const;
  /// Same law translated by `offset`.
  RewardModel translated(double offset) const;

  bool is_pareto() const { return std::holds_alternative<ParetoModel>(law_); }
  const ParetoModel& pareto() const { return std::get<ParetoModel>(law_); }
  std::string describe() const;

 private:
  std::variant<ParetoModel, DiscreteModel> law_;
};

double pareto_mean(const ParetoModel& model);

/// E[X 1{lo <= X < hi}] for a (possibly shifted) Pareto law.
double segment_mean(const ParetoModel& model, double lo, double hi);
double segment_mean(const RewardModel& model, double lo, double hi);

/// alpha * scale^(1+v) / (alpha - (1+v)): the (1+v)-th raw moment of an
/// unshifted Pareto law.
double u_bound(const ParetoModel& model, double v);

/// Inverse-CDF draw shift + scale * U^(-1/alpha), U uniform on (0, 1].
double sample(const ParetoModel& model, Rng& rng);
double sample(const RewardModel& model, Rng& rng);
/// The same map applied to a caller-supplied U, for deterministic checks.
double pareto_quantile(const ParetoModel& model, double uniform);

/// Which nonnegative part of X an oracle call targets.
enum class Part { positive, negative };

/// Query-counted wrapper over a reward model. One handle per run; not shared
/// across threads.
class OracleHandle {
 public:
  explicit OracleHandle(RewardModel model) : model_(std::move(model)) {}

  const RewardModel& model() const { return model_; }
  QueryCounter& counter() { return counter_; }
  const QueryCounter& counter() const { return counter_; }
  std::uint64_t queries_actual() const { return counter_.actual; }
  std::uint64_t queries_declared() const { return counter_.declared; }

  /// Exact E[Y 1{lo <= Y < hi}] for Y = X 1{X >= 0} or Y = -X 1{X < 0}.
  double part_segment_mean(Part part, double lo, double hi) const;

 private:
  RewardModel model_;
  QueryCounter counter_;
};

}  // namespace bandit_lab
