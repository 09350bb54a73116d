// Calibrates Heavy-QLinUCB's constant C: halves C from 1 and reports, for
// each value, how often an epoch's QTME estimate missed its accuracy target
// |x_s - a_s^T theta*| <= eps_s on the theta1 instance. The smallest C with
// no misses is the calibrated value.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "bandit_lab/slb.hpp"

using namespace bandit_lab;

int main(int argc, char** argv) {
  const double delta = argc > 1 ? std::atof(argv[1]) : 0.1;
  const std::int64_t horizon = argc > 2 ? std::atoll(argv[2]) : 100000;
  const int runs = argc > 3 ? std::atoi(argv[3]) : 50;
  const auto instance = build_slb_instance(SlbKind::theta1, 1.0);
  double calibrated = 0.0;
  for (double c = 1.0; c >= 1.0 / 64.0; c /= 2.0) {
    long misses = 0;
    long epochs = 0;
    double worst = 0.0;
    for (int r = 0; r < runs; ++r) {
      Rng rng = make_stream(static_cast<std::uint64_t>(r), "heavy-qlinucb", "theta1");
      const auto run = heavy_qlinucb(instance, horizon, {c, 1.0, delta, false, 16}, rng);
      for (const auto& e : run.epochs) {
        if (!e.completed) continue;
        const double ratio = std::abs(e.estimate - instance.means[e.action]) / e.epsilon;
        worst = std::max(worst, ratio);
        misses += ratio > 1.0;
        ++epochs;
      }
    }
    std::printf("C = %-9g misses %ld/%ld  worst |x - a^T theta*| / eps = %.3f\n", c, misses,
                epochs, worst);
    if (misses > 0) break;
    calibrated = c;
  }
  std::printf("calibrated C = %g (delta = %g, T = %lld, %d runs)\n", calibrated, delta,
              static_cast<long long>(horizon), runs);
  return 0;
}
