// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bandit_lab/amplitude.hpp"
#include "bandit_lab/harness.hpp"
#include "bandit_lab/slb.hpp"

using namespace bandit_lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

double pooled_se(const SummaryRow& a, const SummaryRow& b) {
  return std::sqrt(a.std_final_regret * a.std_final_regret / static_cast<double>(a.runs) +
                   b.std_final_regret * b.std_final_regret / static_cast<double>(b.runs));
}

bool nondecreasing(const std::vector<TraceRecord>& traces) {
  for (const auto& r : traces) {
    double last = 0.0;
    for (const auto& c : r.trace.checkpoints) {
      if (c.cum_regret < last || c.cum_regret < 0.0) return false;
      last = c.cum_regret;
    }
  }
  return true;
}

const SummaryRow& row(const std::vector<SummaryRow>& rows, const std::string& algorithm) {
  for (const auto& r : rows) {
    if (r.algorithm == algorithm) return r;
  }
  throw std::runtime_error("no summary row for " + algorithm);
}

Outcome ae_fidelity() {
  Rng rng(101);
  double worst_tv = 0.0;
  double worst_sum = 0.0;
  for (double a : {0.1, 0.3, 0.7}) {
    for (std::int64_t m : {8, 16, 64}) {
      const auto pmf = ae_pmf(a, m);
      double total = 0.0;
      for (double p : pmf) total += p;
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
      std::vector<double> counts(pmf.size(), 0.0);
      QueryCounter counter;
      const int draws = 100000;
      for (int i = 0; i < draws; ++i) {
        counts[static_cast<std::size_t>(ae_sample_outcome({a, m}, rng, counter))] += 1.0;
      }
      double tv = 0.0;
      for (std::size_t y = 0; y < pmf.size(); ++y) tv += std::abs(counts[y] / draws - pmf[y]);
      worst_tv = std::max(worst_tv, 0.5 * tv);
    }
  }
  return {worst_tv < 0.01 && worst_sum <= 1e-12,
          fmt("max TV %.4f (< 0.01), max |sum - 1| %.2e", worst_tv, worst_sum)};
}

Outcome qme_rate() {
  Rng rng(102);
  const double a = 0.25;
  std::vector<double> ts;
  std::vector<double> errors;
  for (std::int64_t t : {32, 64, 128, 256}) {
    std::vector<double> trial_errors;
    QueryCounter counter;
    for (int i = 0; i < 1000; ++i) {
      trial_errors.push_back(std::abs(qme(a, QmeConfig::from_delta(t, 0.05), rng, counter) - a));
    }
    ts.push_back(static_cast<double>(t));
    errors.push_back(median(trial_errors));
  }
  const double slope = loglog_slope(ts, errors);
  return {slope >= -1.2 && slope <= -0.8, fmt("median-error slope %.3f in [-1.2, -0.8]", slope)};
}

Outcome estimator_separation() {
  const auto config = parse_config(
      "kind = estimator-bench\nv = 0.5\ndelta = 0.05\nrepeats = 500\nn_min = 16\nn_max = 1024\n");
  const auto result = run_experiment(config);
  const auto summary = summarize_estimators(result.estimates);
  auto slope = [&](const std::string& estimator, bool use_median) {
    std::vector<double> ns;
    std::vector<double> errors;
    for (const auto& r : summary) {
      if (r.estimator != estimator) continue;
      ns.push_back(static_cast<double>(r.n));
      errors.push_back(use_median ? r.median_abs_error : r.mean_abs_error);
    }
    return loglog_slope(ns, errors);
  };
  const double quantum = slope("qtme", false);
  const double classical = slope("truncated-mean", false);
  const bool pass = quantum >= -0.82 && quantum <= -0.52 && classical >= -0.48 &&
                    classical <= -0.18 && quantum <= classical - 0.2;
  return {pass, fmt("mean-|error| slopes: qtme %.3f in [-0.82, -0.52], truncated-mean %.3f "
                    "in [-0.48, -0.18], gap %.3f >= 0.2 (median-|error| slopes %.3f, %.3f)",
                    quantum, classical, classical - quantum, slope("qtme", true),
                    slope("truncated-mean", true))};
}

std::vector<TraceRecord> mab_s1(double v) {
  auto config = parse_config(
      "kind = mab\ninstance = S1\nT = 1e6\ndelta = one-over-T\nrepeats = 20\n");
  config.v = v;
  return run_experiment(config).traces;
}

Outcome mab_separation(const std::vector<TraceRecord>& traces) {
  const auto rows = summarize(traces);
  const auto& heavy = row(rows, "heavy-qucb");
  const auto& robust = row(rows, "robust-ucb");
  const double se = pooled_se(heavy, robust);
  const bool monotone = nondecreasing(traces);
  const bool pass = robust.mean_final_regret - heavy.mean_final_regret >= 2.0 * se && monotone;
  return {pass, fmt("heavy-qucb %.1f +- %.1f vs robust-ucb %.1f +- %.1f; gap %.1f pooled SE "
                    "(>= 2); traces nondecreasing: %s",
                    heavy.mean_final_regret, heavy.std_final_regret, robust.mean_final_regret,
                    robust.std_final_regret,
                    se > 0.0 ? (robust.mean_final_regret - heavy.mean_final_regret) / se
                             : INFINITY,
                    monotone ? "yes" : "no")};
}

Outcome moment_direction(const std::vector<TraceRecord>& at_half) {
  auto at_low = mab_s1(0.2);
  const double high_v = row(summarize(at_half), "heavy-qucb").mean_final_regret;
  const double low_v = row(summarize(at_low), "heavy-qucb").mean_final_regret;
  return {high_v < low_v, fmt("heavy-qucb mean final regret v=0.5: %.1f < v=0.2: %.1f", high_v,
                              low_v)};
}

Outcome slb_structure() {
  const auto config = parse_config("kind = slb\n");
  const auto instance = build_slb_instance(SlbKind::theta1, 1.0);
  const std::int64_t bound = epoch_bound(2, 1.0, 1000000, 1.0, 1.0);
  double worst = 0.0;
  std::size_t epochs = 0;
  bool within = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(make_stream(seed, "heavy-qlinucb", "theta1"));
    const auto run = heavy_qlinucb(instance, 1000000,
                                   {config.C, config.lambda, config.resolved_delta(), false},
                                   rng, seed);
    int s = 0;
    for (const auto& epoch : run.epochs) {
      if (!epoch.completed) continue;
      ++s;
      const double expected = std::ldexp(1.0, s);  // 2^s lambda^d, lambda = 1
      worst = std::max(worst, std::abs(epoch.determinant - expected) / expected);
    }
    epochs = std::max(epochs, run.epochs.size());
    within = within && static_cast<std::int64_t>(run.epochs.size()) <= bound;
  }
  return {bound == 78 && within && worst <= 1e-6,
          fmt("max det rel error %.2e (<= 1e-6); max epochs %zu <= m = %lld", worst, epochs,
              static_cast<long long>(bound))};
}

Outcome coverage() {
  const auto config = parse_config("kind = slb\n");
  const auto instance = build_slb_instance(SlbKind::theta1, 1.0);
  int covered = 0;
  const int runs = 200;
  for (int seed = 0; seed < runs; ++seed) {
    Rng rng(make_stream(static_cast<std::uint64_t>(seed), "heavy-qlinucb", "theta1"));
    covered += heavy_qlinucb(instance, 100000, {config.C, config.lambda, 0.1, false}, rng)
                   .covered();
  }
  const double rate = covered / static_cast<double>(runs);
  return {rate >= 0.85, fmt("coverage %d/%d = %.3f (>= 0.85) at delta 0.1, T 1e5", covered, runs,
                            rate)};
}

Outcome slb_separation() {
  const auto config = parse_config(
      "kind = slb\ninstance = theta1\nv = 1\nT = 1e6\nlambda = 1\nrepeats = 20\n");
  const auto rows = summarize(run_experiment(config).traces);
  const auto& heavy = row(rows, "heavy-qlinucb");
  const auto& lin = row(rows, "linucb");
  const double se = pooled_se(heavy, lin);
  const double gap = lin.mean_final_regret - heavy.mean_final_regret;
  return {gap >= 2.0 * se,
          fmt("heavy-qlinucb %.1f +- %.1f vs linucb %.1f +- %.1f; gap %.1f pooled SE (>= 2); "
              "delta %.3g, C %.3g",
              heavy.mean_final_regret, heavy.std_final_regret, lin.mean_final_regret,
              lin.std_final_regret, gap / se, config.resolved_delta(), config.C)};
}

// Cyclic coordinate descent on the weighted ridge objective; each step
// minimizes the quadratic exactly along one axis.
Vector coordinate_descent(const std::vector<EpochRecord>& history, double lambda,
                          std::int64_t d) {
  Vector theta = Vector::Zero(d);
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double moved = 0.0;
    for (std::int64_t j = 0; j < d; ++j) {
      double curvature = lambda;
      double slope = 0.0;
      for (const auto& r : history) {
        const double w = 1.0 / (r.epsilon * r.epsilon);
        const double rest = r.action.dot(theta) - r.action(j) * theta(j);
        curvature += w * r.action(j) * r.action(j);
        slope += w * r.action(j) * (r.reward - rest);
      }
      const double next = slope / curvature;
      moved = std::max(moved, std::abs(next - theta(j)));
      theta(j) = next;
    }
    if (moved < 1e-15) break;
  }
  return theta;
}

Outcome wls_oracle() {
  Rng rng(109);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> eps(0.1, 2.0);
  std::uniform_real_distribution<double> lam(0.1, 2.0);
  std::uniform_int_distribution<int> dims(1, 4);
  std::uniform_int_distribution<int> lengths(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dims(rng);
    std::vector<EpochRecord> history;
    for (int k = lengths(rng); k > 0; --k) {
      Vector a(d);
      for (int j = 0; j < d; ++j) a(j) = gauss(rng);
      history.push_back({a, gauss(rng), eps(rng)});
    }
    const double lambda = lam(rng);
    const Vector closed = wls_update(history, lambda, d).theta_hat;
    const Vector brute = coordinate_descent(history, lambda, d);
    worst = std::max(worst, (closed - brute).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6, fmt("max coordinate difference %.2e (<= 1e-6) over 100 histories", worst)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += outcome.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", id,
                name.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  };

  std::vector<TraceRecord> s1_half;
  report(1, "AE fidelity", ae_fidelity);
  report(2, "QME rate", qme_rate);
  report(3, "estimator rate separation", estimator_separation);
  report(4, "MAB regret separation", [&] {
    s1_half = mab_s1(0.5);
    return mab_separation(s1_half);
  });
  report(5, "moment direction", [&] {
    if (s1_half.empty()) s1_half = mab_s1(0.5);
    return moment_direction(s1_half);
  });
  report(6, "SLB structural invariants", slb_structure);
  report(7, "confidence coverage", coverage);
  report(8, "SLB regret separation", slb_separation);
  report(9, "WLS oracle equivalence", wls_oracle);
  return failures;
}
