// Calibrates the QME error constant: the 99th percentile of
// |estimate - a| / (sqrt(a) log(1/delta) / t + log^2(1/delta) / t^2)
// over a grid of Bernoulli amplitudes, budgets and failure levels.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "bandit_lab/amplitude.hpp"

using namespace bandit_lab;

int main(int argc, char** argv) {
  const int trials = argc > 1 ? std::atoi(argv[1]) : 2000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 12345;
  Rng rng(seed);
  std::vector<double> ratios;
  double worst = 0.0;
  for (double delta : {0.05, 0.01}) {
    for (std::int64_t t = 16; t <= 256; t *= 2) {
      for (int step = 1; step <= 19; ++step) {
        const double a = 0.05 * step;
        const auto config = QmeConfig::from_delta(t, delta);
        const double unit = qme_error_bound(a, t, delta, 1.0);
        std::vector<double> cell;
        for (int i = 0; i < trials; ++i) {
          QueryCounter counter;
          const double ratio = std::abs(qme(a, config, rng, counter) - a) / unit;
          cell.push_back(ratio);
          ratios.push_back(ratio);
        }
        std::sort(cell.begin(), cell.end());
        worst = std::max(worst, cell[static_cast<std::size_t>(0.99 * (cell.size() - 1))]);
      }
    }
  }
  std::sort(ratios.begin(), ratios.end());
  const auto at = [&](double q) {
    return ratios[static_cast<std::size_t>(q * static_cast<double>(ratios.size() - 1))];
  };
  std::printf("pooled p50 %.4f  p99 %.4f  p999 %.4f  max %.4f\n", at(0.5), at(0.99),
              at(0.999), ratios.back());
  std::printf("worst per-cell p99 %.4f\n", worst);
  return 0;
}
