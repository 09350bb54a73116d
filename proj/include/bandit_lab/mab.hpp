#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bandit_lab/estimators.hpp"
#include "bandit_lab/rewards.hpp"
#include "bandit_lab/rng.hpp"
#include "bandit_lab/trace.hpp"

namespace bandit_lab {

inline constexpr int kDefaultCheckpoints = 200;

struct MabInstance {
  std::string name;
  std::vector<RewardModel> arms;
  std::vector<double> means;
  MomentBound bound;
  double optimal_mean = 0.0;

  std::size_t arm_count() const { return arms.size(); }
};

enum class MabKind { s1, s2, s3 };

MabKind parse_mab_kind(std::string_view name);
std::string_view to_string(MabKind kind);

/// Arm means of the three synthetic five-arm instances, arms a = 1..5.
std::vector<double> instance_means(MabKind kind);

/// Five Pareto arms with alpha = 1.05 + v, scale_i = (alpha - 1) mu_i / alpha,
/// and u the largest per-arm (1+v)-th raw moment.
MabInstance build_instance(MabKind kind, double v);

/// Instance over arbitrary arms; fills means and optimal_mean.
MabInstance make_instance(std::string name, std::vector<RewardModel> arms,
                          MomentBound bound);

/// beta = u^(1/(1+v)) log(1/delta)^(2v/(1+v)) / (C N^(2v/(1+v))).
double heavy_qucb_radius(const MomentBound& bound, double delta, double c,
                         std::int64_t pulls);

/// Rounds per epoch: ceil(C N log^(3/2)(1/delta)).
std::int64_t epoch_rounds(double c, double n, double delta);

struct ArmState {
  std::int64_t N = 1;
  double beta = 0.0;
  double mu_hat = 0.0;
};

/// Lowest index among maxima of estimate + radius.
std::size_t select_arm(const std::vector<ArmState>& arms);

struct MabEpoch {
  std::size_t arm = 0;
  std::int64_t N = 1;
  std::int64_t rounds = 0;  // rounds actually played
  bool initialization = false;
  bool completed = true;  // false for the final epoch cut at the horizon
};

struct MabRun {
  RegretTrace trace;
  std::vector<MabEpoch> epochs;
  std::vector<std::int64_t> pulls;  // per arm
  std::vector<ArmState> final_state;
};

struct HeavyQucbOptions {
  double c = 1.0;
  double delta = 1e-6;
  int checkpoints = kDefaultCheckpoints;
};

/// Batched UCB on QTME estimates with per-arm doubling. Throws
/// std::invalid_argument if initialization alone exceeds the horizon.
MabRun heavy_qucb(const MabInstance& instance, std::int64_t horizon,
                  const HeavyQucbOptions& options, Rng& rng,
                  std::uint64_t seed = 0);

struct RobustUcbOptions {
  double delta = 1e-6;
  int checkpoints = kDefaultCheckpoints;
};

/// Classical UCB on truncated empirical means with one sample per round.
MabRun robust_ucb(const MabInstance& instance, std::int64_t horizon,
                  const RobustUcbOptions& options, Rng& rng,
                  std::uint64_t seed = 0);

}  // namespace bandit_lab
