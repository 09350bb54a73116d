#include "bandit_lab/slb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bandit_lab/mab.hpp"

namespace bandit_lab {

namespace {

constexpr double kSingularTolerance = 1e-12;

void check_spd(const Matrix& V) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(V, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(largest > 0.0) || smallest < kSingularTolerance * largest) {
    throw std::domain_error("design matrix V is singular or indefinite");
  }
}

}  // namespace

SlbKind parse_slb_kind(std::string_view name) {
  if (name == "theta1") return SlbKind::theta1;
  if (name == "theta2") return SlbKind::theta2;
  if (name == "theta3") return SlbKind::theta3;
  throw std::invalid_argument("unknown SLB instance '" + std::string(name) +
                              "' (expected theta1, theta2 or theta3)");
}

std::string_view to_string(SlbKind kind) {
  switch (kind) {
    case SlbKind::theta1: return "theta1";
    case SlbKind::theta2: return "theta2";
    case SlbKind::theta3: return "theta3";
  }
  return "?";
}

std::vector<Vector> quarter_circle_actions(int count) {
  if (count < 1) {
    throw std::invalid_argument("action count must be >= 1");
  }
  std::vector<Vector> actions;
  actions.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double angle =
        count == 1 ? 0.0 : (std::numbers::pi / 2.0) * i / (count - 1);
    Vector a(2);
    a << std::cos(angle), std::sin(angle);
    actions.push_back(std::move(a));
  }
  return actions;
}

RewardModel centered_pareto_noise(double v) {
  ParetoModel noise{1.05 + v, 1.0, 0.0};
  noise.shift = -pareto_mean(noise);
  return RewardModel(noise);
}

SlbInstance make_slb_instance(std::string name, Vector theta_star,
                              std::vector<Vector> actions, RewardModel noise,
                              double v) {
  if (actions.empty()) {
    throw std::invalid_argument("SLB instance needs at least one action");
  }
  if (!(v > 0.0 && v <= 1.0)) {
    throw std::domain_error("v must lie in (0, 1]");
  }
  for (const auto& a : actions) {
    if (a.size() != theta_star.size()) {
      throw std::invalid_argument("action dimension differs from theta*");
    }
  }
  SlbInstance instance{std::move(name), std::move(theta_star), std::move(actions),
                       std::move(noise), {v, 1.0}, 0.0, 0.0, {}, 0, 0.0};
  instance.S = instance.theta_star.norm();
  double u = 0.0;
  for (const auto& a : instance.actions) {
    instance.L = std::max(instance.L, a.norm());
    instance.means.push_back(a.dot(instance.theta_star));
  }
  for (std::size_t i = 0; i < instance.actions.size(); ++i) {
    u = std::max(u, instance.reward_model(i).raw_moment(1.0 + v));
  }
  // A noiseless zero reward has no moment; any positive u is then valid.
  instance.bound.u = u > 0.0 ? u : 1.0;
  instance.best_action = static_cast<std::size_t>(
      std::max_element(instance.means.begin(), instance.means.end()) -
      instance.means.begin());
  instance.best_mean = instance.means[instance.best_action];
  return instance;
}

SlbInstance build_slb_instance(SlbKind kind, double v, int action_count) {
  double angle = 0.0;
  switch (kind) {
    case SlbKind::theta1: angle = 0.35 * std::numbers::pi; break;
    case SlbKind::theta2: angle = std::numbers::pi / 6.0; break;
    case SlbKind::theta3: angle = 5.0 * std::numbers::pi / 6.0; break;
  }
  Vector theta(2);
  theta << std::cos(angle), std::sin(angle);
  return make_slb_instance(std::string(to_string(kind)), std::move(theta),
                           quarter_circle_actions(action_count),
                           centered_pareto_noise(v), v);
}

std::int64_t epoch_bound(std::int64_t d, double L, std::int64_t horizon,
                         double lambda, double v) {
  if (!(v >= 1.0 / 3.0 && v <= 1.0)) {
    throw std::domain_error("epoch bound holds only for v in [1/3, 1]");
  }
  if (d < 1 || !(L > 0.0) || horizon < 1 || !(lambda > 0.0)) {
    throw std::domain_error("epoch bound needs positive d, L, T, lambda");
  }
  const double dd = static_cast<double>(d);
  const double growth = std::pow(static_cast<double>(horizon), 4.0 * v / (1.0 + v));
  return static_cast<std::int64_t>(
      std::ceil(dd * std::log2(L * L * growth / (dd * lambda) + 1.0)));
}

double confidence_radius(std::int64_t s, double lambda, double S, std::int64_t d) {
  if (s < 0) {
    throw std::domain_error("epoch index must be >= 0");
  }
  return std::sqrt(lambda) * S + std::sqrt(static_cast<double>(d * s));
}

double weighted_norm(const Vector& x, const Matrix& m) {
  return std::sqrt(std::max(0.0, x.dot(m * x)));
}

Selection optimistic_select(const std::vector<Vector>& actions,
                            const Vector& theta_hat, const Matrix& V,
                            double radius) {
  if (actions.empty()) {
    throw std::invalid_argument("no actions to select from");
  }
  if (radius < 0.0) {
    throw std::domain_error("radius must be nonnegative");
  }
  check_spd(V);
  const Eigen::LLT<Matrix> llt(V);
  Selection best;
  bool first = true;
  Vector best_direction;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Vector& a = actions[i];
    const Vector direction = llt.solve(a);  // V^-1 a
    const double eps = std::sqrt(std::max(0.0, a.dot(direction)));
    const double value = a.dot(theta_hat) + radius * eps;
    if (first || value > best.value) {
      first = false;
      best.index = i;
      best.epsilon = eps;
      best.value = value;
      best_direction = direction;
    }
  }
  best.theta_tilde = theta_hat;
  if (best.epsilon > 0.0) {
    best.theta_tilde += (radius / best.epsilon) * best_direction;
  }
  return best;
}

WlsFit wls_update(const std::vector<EpochRecord>& history, double lambda,
                  std::int64_t d) {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("lambda must be nonnegative");
  }
  WlsFit fit{Vector::Zero(d), Matrix::Identity(d, d) * lambda};
  Vector rhs = Vector::Zero(d);
  for (const auto& record : history) {
    if (!(record.epsilon > 0.0)) {
      throw std::domain_error("epoch accuracy epsilon must be positive");
    }
    const double weight = 1.0 / (record.epsilon * record.epsilon);
    fit.V.noalias() += weight * record.action * record.action.transpose();
    rhs += weight * record.reward * record.action;
  }
  if (!history.empty()) {
    fit.theta_hat = fit.V.ldlt().solve(rhs);
  }
  return fit;
}

double wls_objective(const std::vector<EpochRecord>& history, double lambda,
                     const Vector& theta) {
  double total = lambda * theta.squaredNorm();
  for (const auto& record : history) {
    const double residual = record.action.dot(theta) - record.reward;
    total += residual * residual / (record.epsilon * record.epsilon);
  }
  return total;
}

double design_spectral_norm(const Matrix& V, double lambda) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(V, Eigen::EigenvaluesOnly);
  return std::max(0.0, 1.0 - lambda / eig.eigenvalues().maxCoeff());
}

std::size_t SlbRun::completed_epochs() const {
  return static_cast<std::size_t>(std::count_if(
      epochs.begin(), epochs.end(), [](const SlbEpoch& e) { return e.completed; }));
}

bool SlbRun::covered() const {
  return std::all_of(epochs.begin(), epochs.end(), [](const SlbEpoch& e) {
    return !e.completed || e.theta_error <= e.radius_after;
  });
}

SlbRun heavy_qlinucb(const SlbInstance& instance, std::int64_t horizon,
                     const HeavyQlinucbOptions& options, Rng& rng,
                     std::uint64_t seed) {
  const double v = instance.bound.v;
  const double delta = options.delta;
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(options.c > 0.0) || !(options.lambda > 0.0)) {
    throw std::invalid_argument("C and lambda must be positive");
  }
  const auto d = static_cast<std::int64_t>(instance.dimension());
  SlbRun run;
  run.epoch_limit = epoch_bound(d, instance.L, horizon, options.lambda, v);
  const double m = static_cast<double>(run.epoch_limit);
  const double epoch_delta = delta / m;
  if (!(epoch_delta > 0.0)) {
    throw std::invalid_argument("delta / m underflows");
  }

  std::vector<OracleHandle> oracles;
  oracles.reserve(instance.actions.size());
  for (std::size_t i = 0; i < instance.actions.size(); ++i) {
    oracles.emplace_back(instance.reward_model(i));
  }
  run.pulls.assign(instance.actions.size(), 0);
  run.theta_hat = Vector::Zero(d);
  run.V = Matrix::Identity(d, d) * options.lambda;
  RegretRecorder recorder(horizon, options.checkpoints);

  const double u_factor = std::pow(instance.bound.u, 1.0 / (2.0 * v));
  const double log_m_delta = std::log(m / delta);
  const double eps_exponent = (1.0 + v) / (2.0 * v);

  std::int64_t s = 0;
  while (!recorder.done()) {
    ++s;
    double radius = confidence_radius(s - 1, options.lambda, instance.S, d);
    if (options.tight_radius) {
      radius = std::sqrt(options.lambda) * instance.S +
               std::sqrt(static_cast<double>(s - 1) *
                         design_spectral_norm(run.V, options.lambda));
    }
    const Selection pick = optimistic_select(instance.actions, run.theta_hat, run.V, radius);
    const Vector& action = instance.actions[pick.index];

    SlbEpoch epoch;
    epoch.action = pick.index;
    epoch.epsilon = pick.epsilon;
    epoch.radius = radius;
    epoch.n_target =
        options.c * u_factor * log_m_delta / std::pow(pick.epsilon, eps_exponent);
    const std::int64_t rounds = epoch_rounds(options.c, epoch.n_target, delta);
    epoch.rounds = recorder.play(rounds, instance.best_mean - instance.means[pick.index]);
    run.pulls[pick.index] += epoch.rounds;
    epoch.completed = epoch.rounds == rounds;
    if (!epoch.completed) {
      run.epochs.push_back(epoch);
      break;
    }

    const auto n = static_cast<std::int64_t>(std::ceil(epoch.n_target));
    const auto config = make_estimator_config(instance.bound, n, epoch_delta, options.c);
    epoch.estimate = qtme(oracles[pick.index], config, rng);

    run.history.push_back({action, epoch.estimate, pick.epsilon});
    run.V.noalias() += (1.0 / (pick.epsilon * pick.epsilon)) * action * action.transpose();
    run.theta_hat = wls_update(run.history, options.lambda, d).theta_hat;

    epoch.determinant = run.V.determinant();
    epoch.theta_error = weighted_norm(run.theta_hat - instance.theta_star, run.V);
    epoch.radius_after = confidence_radius(s, options.lambda, instance.S, d);
    run.epochs.push_back(epoch);
  }

  std::uint64_t actual = 0;
  std::uint64_t declared = 0;
  for (const auto& oracle : oracles) {
    actual += oracle.queries_actual();
    declared += oracle.queries_declared();
  }
  run.trace = recorder.finish(seed, actual, declared);
  return run;
}

SlbRun linucb(const SlbInstance& instance, std::int64_t horizon,
              const LinUcbOptions& options, Rng& rng, std::uint64_t seed) {
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(options.lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  const auto d = static_cast<std::int64_t>(instance.dimension());
  const std::size_t k = instance.actions.size();
  const double dd = static_cast<double>(d);
  const double beta =
      std::sqrt(options.lambda) * instance.S +
      std::sqrt(2.0 * std::log(1.0 / options.delta) +
                dd * std::log(1.0 + static_cast<double>(horizon) * instance.L *
                                        instance.L / (dd * options.lambda)));

  std::vector<RewardModel> laws;
  laws.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    laws.push_back(instance.reward_model(i));
  }

  SlbRun run;
  run.pulls.assign(k, 0);
  run.V = Matrix::Identity(d, d) * options.lambda;
  Matrix v_inv = Matrix::Identity(d, d) / options.lambda;
  Vector b = Vector::Zero(d);
  run.theta_hat = Vector::Zero(d);
  Vector scratch(d);
  RegretRecorder recorder(horizon, options.checkpoints);

  // Sherman-Morrison keeps V^-1 current; a periodic refactorization bounds
  // the accumulated rounding.
  constexpr std::int64_t kRefresh = 1024;
  while (!recorder.done()) {
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const Vector& a = instance.actions[i];
      scratch.noalias() = v_inv * a;
      const double value =
          a.dot(run.theta_hat) + beta * std::sqrt(std::max(0.0, a.dot(scratch)));
      if (i == 0 || value > best_value) {
        best = i;
        best_value = value;
      }
    }
    const Vector& a = instance.actions[best];
    const double reward = laws[best].sample(rng);
    recorder.play(1, instance.best_mean - instance.means[best]);
    ++run.pulls[best];

    run.V.noalias() += a * a.transpose();
    b += reward * a;
    if (recorder.played() % kRefresh == 0) {
      v_inv = run.V.inverse();
    } else {
      scratch.noalias() = v_inv * a;
      v_inv -= (scratch * scratch.transpose()) / (1.0 + a.dot(scratch));
    }
    run.theta_hat.noalias() = v_inv * b;
  }
  const auto samples = static_cast<std::uint64_t>(recorder.played());
  run.trace = recorder.finish(seed, samples, samples);
  return run;
}

}  // namespace bandit_lab
