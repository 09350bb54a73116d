#include "bandit_lab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandit_lab {

std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon, int count) {
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  if (count < 1) {
    throw std::invalid_argument("checkpoint count must be >= 1");
  }
  std::vector<std::int64_t> rounds;
  rounds.reserve(static_cast<std::size_t>(count) + 1);
  const double log_horizon = std::log(static_cast<double>(horizon));
  for (int i = 0; i < count; ++i) {
    const double r = std::exp(log_horizon * i / count);
    const auto round = std::clamp<std::int64_t>(std::llround(r), 1, horizon);
    if (rounds.empty() || round > rounds.back()) {
      rounds.push_back(round);
    }
  }
  if (rounds.back() != horizon) {
    rounds.push_back(horizon);
  }
  return rounds;
}

RegretRecorder::RegretRecorder(std::int64_t horizon, std::vector<std::int64_t> rounds)
    : horizon_(horizon), rounds_(std::move(rounds)) {
  if (horizon_ < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  recorded_.reserve(rounds_.size());
}

std::int64_t RegretRecorder::play(std::int64_t rounds, double gap) {
  const std::int64_t n = std::clamp<std::int64_t>(rounds, 0, remaining());
  const std::int64_t end = played_ + n;
  std::size_t next = recorded_.size();
  while (next < rounds_.size() && rounds_[next] <= end) {
    const auto within = static_cast<double>(rounds_[next] - played_);
    recorded_.push_back({rounds_[next], cumulative_ + gap * within});
    ++next;
  }
  cumulative_ += gap * static_cast<double>(n);
  played_ = end;
  return n;
}

RegretTrace RegretRecorder::finish(std::uint64_t seed, std::uint64_t queries_actual,
                                   std::uint64_t queries_declared) const {
  RegretTrace trace;
  trace.checkpoints = recorded_;
  trace.seed = seed;
  trace.queries_actual = queries_actual;
  trace.queries_declared = queries_declared;
  return trace;
}

}  // namespace bandit_lab
