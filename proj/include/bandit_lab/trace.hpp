#pragma once

#include <cstdint>
#include <vector>

namespace bandit_lab {

struct Checkpoint {
  std::int64_t round = 0;
  double cum_regret = 0.0;

  bool operator==(const Checkpoint&) const = default;
};

/// Cumulative pseudo-regret of one seeded run at selected rounds.
struct RegretTrace {
  std::vector<Checkpoint> checkpoints;
  std::uint64_t seed = 0;
  std::uint64_t queries_actual = 0;
  std::uint64_t queries_declared = 0;

  double final_regret() const {
    return checkpoints.empty() ? 0.0 : checkpoints.back().cum_regret;
  }
  bool operator==(const RegretTrace&) const = default;
};

/// `count` geometrically spaced rounds in [1, horizon) plus the horizon,
/// deduplicated and strictly increasing.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon, int count);

/// Accumulates pseudo-regret over blocks of identical pulls and records it at
/// the requested checkpoint rounds.
class RegretRecorder {
 public:
  RegretRecorder(std::int64_t horizon, std::vector<std::int64_t> rounds);
  RegretRecorder(std::int64_t horizon, int checkpoint_count)
      : RegretRecorder(horizon, geometric_checkpoints(horizon, checkpoint_count)) {}

  /// Plays `rounds` consecutive rounds with per-round gap `gap`, clipped to
  /// the horizon. Returns the number of rounds actually played.
  std::int64_t play(std::int64_t rounds, double gap);

  std::int64_t played() const { return played_; }
  std::int64_t remaining() const { return horizon_ - played_; }
  bool done() const { return played_ >= horizon_; }
  double cumulative() const { return cumulative_; }

  RegretTrace finish(std::uint64_t seed, std::uint64_t queries_actual,
                     std::uint64_t queries_declared) const;

 private:
  std::int64_t horizon_;
  std::vector<std::int64_t> rounds_;
  std::vector<Checkpoint> recorded_;
  std::int64_t played_ = 0;
  double cumulative_ = 0.0;
};

}  // namespace bandit_lab
