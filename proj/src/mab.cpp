#include "bandit_lab/mab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandit_lab {

MabKind parse_mab_kind(std::string_view name) {
  if (name == "S1" || name == "s1") return MabKind::s1;
  if (name == "S2" || name == "s2") return MabKind::s2;
  if (name == "S3" || name == "s3") return MabKind::s3;
  throw std::invalid_argument("unknown MAB instance '" + std::string(name) +
                              "' (expected S1, S2 or S3)");
}

std::string_view to_string(MabKind kind) {
  switch (kind) {
    case MabKind::s1: return "S1";
    case MabKind::s2: return "S2";
    case MabKind::s3: return "S3";
  }
  return "?";
}

std::vector<double> instance_means(MabKind kind) {
  std::vector<double> means(5);
  for (int a = 1; a <= 5; ++a) {
    const double x = a;
    double mu = 0.0;
    switch (kind) {
      case MabKind::s1: mu = 0.1 + 0.2 * (x - 1.0); break;
      case MabKind::s2: mu = 0.05 * (x - 5.0) * (x - 5.0) + 0.1; break;
      case MabKind::s3: mu = -0.05 * (x - 1.0) * (x - 1.0) + 0.9; break;
    }
    means[static_cast<std::size_t>(a - 1)] = mu;
  }
  return means;
}

MabInstance build_instance(MabKind kind, double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw std::domain_error("v must lie in (0, 1]");
  }
  const double alpha = 1.05 + v;
  std::vector<RewardModel> arms;
  double u = 0.0;
  for (double mu : instance_means(kind)) {
    const ParetoModel arm{alpha, (alpha - 1.0) * mu / alpha, 0.0};
    u = std::max(u, u_bound(arm, v));
    arms.emplace_back(arm);
  }
  return make_instance(std::string(to_string(kind)), std::move(arms), {v, u});
}

MabInstance make_instance(std::string name, std::vector<RewardModel> arms,
                          MomentBound bound) {
  if (arms.empty()) {
    throw std::invalid_argument("MAB instance needs at least one arm");
  }
  bound.validate();
  MabInstance instance{std::move(name), std::move(arms), {}, bound, 0.0};
  for (const auto& arm : instance.arms) {
    instance.means.push_back(arm.mean());
  }
  instance.optimal_mean = *std::max_element(instance.means.begin(), instance.means.end());
  return instance;
}

double heavy_qucb_radius(const MomentBound& bound, double delta, double c,
                         std::int64_t pulls) {
  const double order = 1.0 + bound.v;
  const double rate = 2.0 * bound.v / order;
  return std::pow(bound.u, 1.0 / order) * std::pow(std::log(1.0 / delta), rate) /
         (c * std::pow(static_cast<double>(pulls), rate));
}

std::int64_t epoch_rounds(double c, double n, double delta) {
  const double rounds = c * n * std::pow(std::log(1.0 / delta), 1.5);
  // Anything beyond 1e18 exceeds every usable horizon.
  return static_cast<std::int64_t>(std::clamp(std::ceil(rounds), 1.0, 1e18));
}

std::size_t select_arm(const std::vector<ArmState>& arms) {
  std::size_t best = 0;
  double best_index = arms.front().mu_hat + arms.front().beta;
  for (std::size_t i = 1; i < arms.size(); ++i) {
    const double index = arms[i].mu_hat + arms[i].beta;
    if (index > best_index) {
      best = i;
      best_index = index;
    }
  }
  return best;
}

MabRun heavy_qucb(const MabInstance& instance, std::int64_t horizon,
                  const HeavyQucbOptions& options, Rng& rng, std::uint64_t seed) {
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(options.c > 0.0)) {
    throw std::invalid_argument("C must be positive");
  }
  const std::size_t k = instance.arm_count();
  const std::int64_t init_rounds = epoch_rounds(options.c, 1.0, options.delta);
  if (init_rounds * static_cast<std::int64_t>(k) > horizon) {
    throw std::invalid_argument("initialization needs " +
                                std::to_string(init_rounds * static_cast<std::int64_t>(k)) +
                                " rounds, more than T = " + std::to_string(horizon));
  }

  std::vector<OracleHandle> oracles;
  oracles.reserve(k);
  for (const auto& arm : instance.arms) {
    oracles.emplace_back(arm);
  }

  MabRun run;
  run.pulls.assign(k, 0);
  std::vector<ArmState> arms(k);
  RegretRecorder recorder(horizon, options.checkpoints);

  auto estimate = [&](std::size_t i) {
    const auto config = make_estimator_config(instance.bound, arms[i].N,
                                              options.delta, options.c);
    arms[i].mu_hat = qtme(oracles[i], config, rng);
  };
  auto play = [&](std::size_t i, bool initialization) {
    const std::int64_t rounds =
        epoch_rounds(options.c, static_cast<double>(arms[i].N), options.delta);
    const std::int64_t played =
        recorder.play(rounds, instance.optimal_mean - instance.means[i]);
    run.pulls[i] += played;
    const bool completed = played == rounds;
    run.epochs.push_back({i, arms[i].N, played, initialization, completed});
    // A cut final epoch ends the run; its estimate could never be used.
    if (completed) {
      estimate(i);
    }
  };

  for (std::size_t i = 0; i < k; ++i) {
    arms[i].N = 1;
    arms[i].beta = heavy_qucb_radius(instance.bound, options.delta, options.c, 1);
    play(i, true);
  }
  while (!recorder.done()) {
    const std::size_t i = select_arm(arms);
    arms[i].N *= 2;
    arms[i].beta = heavy_qucb_radius(instance.bound, options.delta, options.c, arms[i].N);
    play(i, false);
  }

  std::uint64_t actual = 0;
  std::uint64_t declared = 0;
  for (const auto& oracle : oracles) {
    actual += oracle.queries_actual();
    declared += oracle.queries_declared();
  }
  run.trace = recorder.finish(seed, actual, declared);
  run.final_state = std::move(arms);
  return run;
}

MabRun robust_ucb(const MabInstance& instance, std::int64_t horizon,
                  const RobustUcbOptions& options, Rng& rng, std::uint64_t seed) {
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const std::size_t k = instance.arm_count();
  std::vector<TruncatedMeanAccumulator> stats(
      k, TruncatedMeanAccumulator(instance.bound, options.delta));
  std::vector<double> index(k, 0.0);
  MabRun run;
  run.pulls.assign(k, 0);
  RegretRecorder recorder(horizon, options.checkpoints);

  auto pull = [&](std::size_t i) {
    stats[i].add(instance.arms[i].sample(rng));
    recorder.play(1, instance.optimal_mean - instance.means[i]);
    ++run.pulls[i];
    index[i] = stats[i].estimate() + stats[i].radius();
  };

  for (std::size_t i = 0; i < k && !recorder.done(); ++i) {
    pull(i);
  }
  while (!recorder.done()) {
    const auto best = static_cast<std::size_t>(
        std::max_element(index.begin(), index.end()) - index.begin());
    pull(best);
  }

  run.final_state.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    run.final_state[i].N = stats[i].count();
    if (stats[i].count() > 0) {
      run.final_state[i].mu_hat = stats[i].estimate();
      run.final_state[i].beta = stats[i].radius();
    }
  }
  const auto samples = static_cast<std::uint64_t>(recorder.played());
  run.trace = recorder.finish(seed, samples, samples);
  return run;
}

}  // namespace bandit_lab
