#pragma once

// Experiment orchestration: flat key=value configs, seeded repeats on a
// worker pool, CSV emission and summary statistics.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bandit_lab/trace.hpp"

namespace bandit_lab {

/// Invalid configuration; the message names the offending line or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { mab, slb, estimator_bench };

std::string_view to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::mab;
  std::string instance;
  double v = 0.5;
  std::int64_t T = 1000000;
  bool delta_one_over_T = true;
  double delta = 0.0;
  double C = 1.0;
  double lambda = 1.0;
  int repeats = 100;
  std::uint64_t seed = 0;
  int checkpoints = 200;
  std::vector<std::string> algorithms;
  bool tight_radius = false;
  // estimator-bench grid: powers of two from n_min to n_max
  std::int64_t n_min = 16;
  std::int64_t n_max = 1024;
  std::string name;  // output file stem; defaults to <kind>_<instance>

  double resolved_delta() const;
  std::string output_stem() const;
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Applies one `key = value` assignment. Throws ConfigError naming the key.
void apply_setting(ExperimentConfig& config, std::string_view key,
                   std::string_view value);

/// Parses key=value lines ('#' starts a comment). Missing keys take
/// per-kind defaults. Errors cite `source:line`.
ExperimentConfig parse_config(std::string_view text,
                              std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fills instance/algorithm defaults for the configured kind.
void apply_kind_defaults(ExperimentConfig& config);

struct TraceRecord {
  std::string experiment;
  std::string instance;
  std::string algorithm;
  double v = 0.0;
  double delta = 0.0;
  RegretTrace trace;

  bool operator==(const TraceRecord&) const = default;
};

struct SummaryRow {
  std::string algorithm;
  double mean_final_regret = 0.0;
  double std_final_regret = 0.0;
  double mean_queries = 0.0;
  std::size_t runs = 0;
};

/// One row per algorithm (in order of first appearance): arithmetic mean,
/// sample standard deviation (0 for a single trace) and mean actual queries.
std::vector<SummaryRow> summarize(std::span<const TraceRecord> traces);

struct EstimatorRow {
  std::string experiment;
  std::string instance;
  std::string estimator;
  double v = 0.0;
  double delta = 0.0;
  std::int64_t n = 0;
  int trial = 0;
  double abs_error = 0.0;

  bool operator==(const EstimatorRow&) const = default;
};

struct EstimatorSummaryRow {
  std::string estimator;
  std::int64_t n = 0;
  double median_abs_error = 0.0;
  double mean_abs_error = 0.0;
};

std::vector<EstimatorSummaryRow> summarize_estimators(std::span<const EstimatorRow> rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> values);
double mean(std::span<const double> values);
double sample_stddev(std::span<const double> values);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TraceRecord> traces;     // sorted by (algorithm, seed)
  std::vector<EstimatorRow> estimates; // sorted by (estimator, n, trial)
  bool interrupted = false;
};

/// Worker count: hardware concurrency capped by BANDIT_LAB_THREADS.
unsigned worker_count();

/// Runs every (algorithm, repeat) job. Seeds are seed, seed+1, ...; each
/// job's RNG stream is keyed by (seed, algorithm, instance). Setting `stop`
/// makes workers finish their current job and return what completed.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0,
                                const std::atomic<bool>* stop = nullptr);

/// Runs a single (algorithm, seed) bandit job.
RegretTrace run_bandit_job(const ExperimentConfig& config, std::string_view algorithm,
                           std::uint64_t seed);

inline constexpr std::string_view kTraceHeader =
    "experiment,instance,algorithm,v,delta,seed,round,cum_regret";
inline constexpr std::string_view kSummaryHeader =
    "algorithm,mean_final_regret,std_final_regret,mean_queries";
inline constexpr std::string_view kQueriesHeader =
    "algorithm,seed,queries_actual,queries_declared";
inline constexpr std::string_view kEstimatorHeader =
    "experiment,instance,estimator,v,delta,n,trial,abs_error";
inline constexpr std::string_view kEstimatorSummaryHeader =
    "estimator,n,median_abs_error,mean_abs_error";

/// %.17g formatting.
std::string format_double(double value);

std::string traces_to_csv(std::span<const TraceRecord> traces);
std::string queries_to_csv(std::span<const TraceRecord> traces);
std::string summary_to_csv(std::span<const SummaryRow> rows);
std::string estimates_to_csv(std::span<const EstimatorRow> rows);
std::string estimator_summary_to_csv(std::span<const EstimatorSummaryRow> rows);

/// Inverse of traces_to_csv (+ queries_to_csv when given).
std::vector<TraceRecord> traces_from_csv(std::string_view csv,
                                         std::string_view queries_csv = {});
std::vector<EstimatorRow> estimates_from_csv(std::string_view csv);

/// Writes <stem>.csv, <stem>_summary.csv and (bandit kinds)
/// <stem>_queries.csv under `dir`. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result,
                                                 const std::filesystem::path& dir);

/// Human-readable summary table.
std::string format_summary(std::span<const SummaryRow> rows);
std::string format_estimator_summary(std::span<const EstimatorSummaryRow> rows);

}  // namespace bandit_lab
