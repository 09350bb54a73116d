#pragma once

// Stochastic linear bandits: Heavy-QLinUCB with weighted least squares and
// enumeration-based optimistic selection, plus the LinUCB baseline.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bandit_lab/estimators.hpp"
#include "bandit_lab/rewards.hpp"
#include "bandit_lab/rng.hpp"
#include "bandit_lab/trace.hpp"

namespace bandit_lab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct SlbInstance {
  std::string name;
  Vector theta_star;
  std::vector<Vector> actions;
  RewardModel noise;  // centered
  MomentBound bound;
  double L = 1.0;
  double S = 1.0;
  std::vector<double> means;  // a^T theta* per action
  std::size_t best_action = 0;
  double best_mean = 0.0;

  std::size_t dimension() const { return static_cast<std::size_t>(theta_star.size()); }
  /// Reward law of action i: a_i^T theta* + noise.
  RewardModel reward_model(std::size_t i) const { return noise.translated(means[i]); }
};

enum class SlbKind { theta1, theta2, theta3 };

SlbKind parse_slb_kind(std::string_view name);
std::string_view to_string(SlbKind kind);

/// `count` unit vectors at angles (pi/2) i / (count - 1), i = 0..count-1.
std::vector<Vector> quarter_circle_actions(int count);

/// Centered Pareto(alpha = 1.05 + v, scale 1) noise.
RewardModel centered_pareto_noise(double v);

/// Instance over arbitrary actions and noise. u is the largest (1+v)-th raw
/// moment of any action's reward law, computed numerically; L and S are the
/// largest action norm and ||theta*||.
SlbInstance make_slb_instance(std::string name, Vector theta_star,
                              std::vector<Vector> actions, RewardModel noise,
                              double v);

/// theta1 = (cos 0.35pi, sin 0.35pi), theta2 = (cos pi/6, sin pi/6),
/// theta3 = (cos 5pi/6, sin 5pi/6), with 50 quarter-circle actions and
/// centered Pareto noise.
SlbInstance build_slb_instance(SlbKind kind, double v, int action_count = 50);

/// ceil(d log2(L^2 T^(4v/(1+v)) / (d lambda) + 1)); v must lie in [1/3, 1].
std::int64_t epoch_bound(std::int64_t d, double L, std::int64_t horizon,
                         double lambda, double v);

/// lambda^(1/2) S + sqrt(d s).
double confidence_radius(std::int64_t s, double lambda, double S, std::int64_t d);

/// ||x||_M = sqrt(x^T M x).
double weighted_norm(const Vector& x, const Matrix& m);

struct Selection {
  std::size_t index = 0;
  Vector theta_tilde;
  double epsilon = 0.0;  // ||a||_{V^-1}
  double value = 0.0;    // a^T theta_hat + radius ||a||_{V^-1}
};

/// Maximizes a^T theta over actions x ellipsoid {||theta - theta_hat||_V <=
/// radius} by enumeration. Ties go to the lowest index. Throws
/// std::domain_error if V is singular (smallest/largest eigenvalue < 1e-12).
Selection optimistic_select(const std::vector<Vector>& actions,
                            const Vector& theta_hat, const Matrix& V,
                            double radius);

struct EpochRecord {
  Vector action;
  double reward = 0.0;   // x_k
  double epsilon = 0.0;  // eps_k
};

struct WlsFit {
  Vector theta_hat;
  Matrix V;
};

/// V = lambda I + sum a a^T / eps^2, theta_hat = V^-1 sum a x / eps^2.
/// Empty history yields theta_hat = 0, V = lambda I.
WlsFit wls_update(const std::vector<EpochRecord>& history, double lambda,
                  std::int64_t d);

/// Objective of the weighted ridge problem, for oracle checks.
double wls_objective(const std::vector<EpochRecord>& history, double lambda,
                     const Vector& theta);

/// Largest eigenvalue of W^(1/2) A V^-1 A^T W^(1/2), i.e. 1 - lambda /
/// lambda_max(V), used by the tighter enumeration radius.
double design_spectral_norm(const Matrix& V, double lambda);

struct SlbEpoch {
  std::size_t action = 0;
  double epsilon = 0.0;
  double n_target = 0.0;       // N_s before rounding
  std::int64_t rounds = 0;     // rounds actually played
  bool completed = true;
  double radius = 0.0;         // radius of C_{s-1} used for selection
  double estimate = 0.0;       // x_s
  double determinant = 0.0;    // det(V_s)
  double theta_error = 0.0;    // ||theta_hat_s - theta*||_{V_s}
  double radius_after = 0.0;   // confidence_radius(s, ...)
};

struct SlbRun {
  RegretTrace trace;
  std::vector<SlbEpoch> epochs;
  std::int64_t epoch_limit = 0;  // m
  Vector theta_hat;
  Matrix V;
  std::vector<EpochRecord> history;
  std::vector<std::int64_t> pulls;

  std::size_t completed_epochs() const;
  /// True if ||theta_hat_s - theta*||_{V_s} <= confidence_radius(s) held after
  /// every completed epoch.
  bool covered() const;
};

struct HeavyQlinucbOptions {
  double c = 1.0;
  double lambda = 1.0;
  double delta = 0.01;
  bool tight_radius = false;
  int checkpoints = 200;
};

SlbRun heavy_qlinucb(const SlbInstance& instance, std::int64_t horizon,
                     const HeavyQlinucbOptions& options, Rng& rng,
                     std::uint64_t seed = 0);

struct LinUcbOptions {
  double lambda = 1.0;
  double delta = 0.01;
  int checkpoints = 200;
};

/// Per-round ridge regression on sampled rewards with radius
/// sqrt(lambda) S + sqrt(2 log(1/delta) + d log(1 + T L^2 / (d lambda))).
SlbRun linucb(const SlbInstance& instance, std::int64_t horizon,
              const LinUcbOptions& options, Rng& rng, std::uint64_t seed = 0);

}  // namespace bandit_lab
