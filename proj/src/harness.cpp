#include "bandit_lab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "bandit_lab/estimators.hpp"
#include "bandit_lab/mab.hpp"
#include "bandit_lab/rng.hpp"
#include "bandit_lab/slb.hpp"

namespace bandit_lab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string buffer(trim(text));
  char* end = nullptr;
  const double value = std::strtod(buffer.c_str(), &end);
  if (buffer.empty() || end != buffer.c_str() + buffer.size() || !std::isfinite(value)) {
    throw ConfigError("field '" + std::string(key) + "': expected a real number, got '" +
                      buffer + "'");
  }
  return value;
}

std::int64_t parse_integer(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) {
    return value;
  }
  // Accept integral reals such as 1e6.
  const double real = parse_real(key, t);
  if (real != std::floor(real) || std::abs(real) > 9.0e18) {
    throw ConfigError("field '" + std::string(key) + "': expected an integer, got '" +
                      std::string(t) + "'");
  }
  return static_cast<std::int64_t>(real);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("field '" + std::string(key) + "': expected true/false, got '" +
                    std::string(t) + "'");
}

ExperimentKind parse_kind(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "mab") return ExperimentKind::mab;
  if (t == "slb") return ExperimentKind::slb;
  if (t == "estimator-bench") return ExperimentKind::estimator_bench;
  throw ConfigError("field 'kind': expected mab, slb or estimator-bench, got '" +
                    std::string(t) + "'");
}

bool algorithm_fits(ExperimentKind kind, std::string_view algorithm) {
  switch (kind) {
    case ExperimentKind::mab:
      return algorithm == "heavy-qucb" || algorithm == "robust-ucb";
    case ExperimentKind::slb:
      return algorithm == "heavy-qlinucb" || algorithm == "linucb";
    case ExperimentKind::estimator_bench:
      return algorithm == "qtme" || algorithm == "truncated-mean";
  }
  return false;
}

std::vector<std::int64_t> bench_grid(const ExperimentConfig& config) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = config.n_min; n <= config.n_max; n *= 2) {
    grid.push_back(n);
  }
  return grid;
}

double bench_error(const ExperimentConfig& config, std::string_view estimator,
                   std::int64_t n, Rng& rng) {
  const double alpha = 1.05 + config.v;
  const ParetoModel model{alpha, (alpha - 1.0) * 0.9 / alpha, 0.0};
  const MomentBound bound{config.v, u_bound(model, config.v)};
  const double delta = config.resolved_delta();
  const auto estimator_config = make_estimator_config(bound, n, delta, config.C);
  const double truth = pareto_mean(model);
  if (estimator == "qtme") {
    OracleHandle oracle{RewardModel(model)};
    return std::abs(qtme(oracle, estimator_config, rng) - truth);
  }
  // Classical baseline at the same declared budget c n log^(3/2)(1/delta).
  const auto samples_needed = declared_budget(estimator_config);
  std::vector<double> samples(samples_needed);
  for (double& x : samples) {
    x = sample(model, rng);
  }
  return std::abs(classical_truncated_mean(samples, bound, delta).estimate - truth);
}

template <typename Job>
void run_pool(std::size_t jobs, unsigned threads, const std::atomic<bool>* stop,
              Job&& job) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (stop == nullptr || !stop->load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) {
        return;
      }
      job(i);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) {
    pool.emplace_back(worker);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

std::vector<std::vector<std::string_view>> csv_rows(std::string_view csv,
                                                    std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  bool first = true;
  for (std::string_view line : split(csv, '\n')) {
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (first) {
      if (line != header) {
        throw std::runtime_error("unexpected CSV header '" + std::string(line) + "'");
      }
      first = false;
      continue;
    }
    rows.push_back(split(line, ','));
    if (rows.back().size() != split(header, ',').size()) {
      throw std::runtime_error("malformed CSV row '" + std::string(line) + "'");
    }
  }
  return rows;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::mab: return "mab";
    case ExperimentKind::slb: return "slb";
    case ExperimentKind::estimator_bench: return "estimator-bench";
  }
  return "?";
}

double ExperimentConfig::resolved_delta() const {
  return delta_one_over_T ? 1.0 / static_cast<double>(T) : delta;
}

std::string ExperimentConfig::output_stem() const {
  if (!name.empty()) {
    return name;
  }
  return std::string(to_string(kind)) + "_" + instance;
}

void ExperimentConfig::validate() const {
  if (T < 1) throw ConfigError("field 'T': must be >= 1");
  if (!delta_one_over_T && !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("field 'delta': must lie in (0, 1) or be one-over-T");
  }
  if (delta_one_over_T && T < 2) {
    throw ConfigError("field 'delta': one-over-T needs T >= 2");
  }
  if (!(v > 0.0 && v <= 1.0)) throw ConfigError("field 'v': must lie in (0, 1]");
  if (kind == ExperimentKind::slb && v < 1.0 / 3.0) {
    throw ConfigError("field 'v': slb experiments need v in [1/3, 1]");
  }
  if (!(C > 0.0)) throw ConfigError("field 'C': must be positive");
  if (!(lambda > 0.0)) throw ConfigError("field 'lambda': must be positive");
  if (repeats < 1) throw ConfigError("field 'repeats': must be >= 1");
  if (checkpoints < 1) throw ConfigError("field 'checkpoints': must be >= 1");
  if (algorithms.empty()) throw ConfigError("field 'algorithms': empty list");
  for (const auto& algorithm : algorithms) {
    if (!algorithm_fits(kind, algorithm)) {
      throw ConfigError("field 'algorithms': '" + algorithm + "' is not a " +
                        std::string(to_string(kind)) + " algorithm");
    }
  }
  try {
    switch (kind) {
      case ExperimentKind::mab: parse_mab_kind(instance); break;
      case ExperimentKind::slb: parse_slb_kind(instance); break;
      case ExperimentKind::estimator_bench:
        if (instance != "pareto") throw std::invalid_argument("expected 'pareto'");
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field 'instance': " + std::string(e.what()));
  }
  if (kind == ExperimentKind::estimator_bench && (n_min < 1 || n_max < n_min)) {
    throw ConfigError("field 'n_min'/'n_max': need 1 <= n_min <= n_max");
  }
}

void apply_kind_defaults(ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::mab:
      config.instance = "S1";
      config.v = 0.5;
      config.delta_one_over_T = true;
      config.algorithms = {"heavy-qucb", "robust-ucb"};
      break;
    case ExperimentKind::slb:
      config.instance = "theta1";
      config.v = 1.0;
      config.delta_one_over_T = false;
      config.delta = 0.1;
      // Smallest C whose QTME estimates meet every epoch's accuracy target
      // (tools/calibrate_qlinucb.cpp).
      config.C = 0.5;
      config.algorithms = {"heavy-qlinucb", "linucb"};
      break;
    case ExperimentKind::estimator_bench:
      config.instance = "pareto";
      config.v = 0.5;
      config.delta_one_over_T = false;
      config.delta = 0.05;
      config.repeats = 500;
      config.algorithms = {"qtme", "truncated-mean"};
      break;
  }
}

void apply_setting(ExperimentConfig& config, std::string_view raw_key,
                   std::string_view raw_value) {
  const std::string key(trim(raw_key));
  const std::string_view value = trim(raw_value);
  if (key == "kind") {
    config.kind = parse_kind(value);
  } else if (key == "instance") {
    config.instance = std::string(value);
  } else if (key == "v") {
    config.v = parse_real(key, value);
  } else if (key == "T") {
    config.T = parse_integer(key, value);
  } else if (key == "delta") {
    if (value == "one-over-T") {
      config.delta_one_over_T = true;
    } else {
      config.delta_one_over_T = false;
      config.delta = parse_real(key, value);
    }
  } else if (key == "C") {
    config.C = parse_real(key, value);
  } else if (key == "lambda") {
    config.lambda = parse_real(key, value);
  } else if (key == "repeats") {
    config.repeats = static_cast<int>(parse_integer(key, value));
  } else if (key == "seed") {
    const auto seed = parse_integer(key, value);
    if (seed < 0) throw ConfigError("field 'seed': must be nonnegative");
    config.seed = static_cast<std::uint64_t>(seed);
  } else if (key == "checkpoints") {
    config.checkpoints = static_cast<int>(parse_integer(key, value));
  } else if (key == "algorithms" || key == "algo") {
    config.algorithms.clear();
    for (auto item : split(value, ',')) {
      item = trim(item);
      if (!item.empty()) config.algorithms.emplace_back(item);
    }
  } else if (key == "tight_radius") {
    config.tight_radius = parse_bool(key, value);
  } else if (key == "n_min") {
    config.n_min = parse_integer(key, value);
  } else if (key == "n_max") {
    config.n_max = parse_integer(key, value);
  } else if (key == "name") {
    config.name = std::string(value);
  } else {
    throw ConfigError("unknown field '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(where + ": missing key");
    }
    for (const auto& e : entries) {
      if (e.key == key) {
        throw ConfigError(where + ": duplicate field '" + std::string(key) +
                          "' (first set on line " + std::to_string(e.line) + ")");
      }
    }
    entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }

  ExperimentConfig config;
  const auto kind_it = std::find_if(entries.begin(), entries.end(),
                                    [](const Entry& e) { return e.key == "kind"; });
  if (kind_it == entries.end()) {
    throw ConfigError(std::string(source) + ": missing required field 'kind'");
  }
  try {
    config.kind = parse_kind(kind_it->value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(kind_it->line) + ": " +
                      e.what());
  }
  apply_kind_defaults(config);
  for (const auto& e : entries) {
    try {
      apply_setting(config, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(std::string(source) + ":" + std::to_string(e.line) + ": " +
                        err.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.string());
}

std::vector<SummaryRow> summarize(std::span<const TraceRecord> traces) {
  if (traces.empty()) {
    throw std::invalid_argument("summarize needs at least one trace");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TraceRecord*>> groups;
  for (const auto& record : traces) {
    auto& group = groups[record.algorithm];
    if (group.empty()) order.push_back(record.algorithm);
    group.push_back(&record);
  }
  std::vector<SummaryRow> rows;
  for (const auto& algorithm : order) {
    const auto& group = groups[algorithm];
    std::vector<double> finals;
    std::vector<double> queries;
    for (const auto* record : group) {
      finals.push_back(record->trace.final_regret());
      queries.push_back(static_cast<double>(record->trace.queries_actual));
    }
    rows.push_back({algorithm, mean(finals), sample_stddev(finals), mean(queries),
                    group.size()});
  }
  return rows;
}

std::vector<EstimatorSummaryRow> summarize_estimators(std::span<const EstimatorRow> rows) {
  std::map<std::pair<std::string, std::int64_t>, std::vector<double>> groups;
  for (const auto& row : rows) {
    groups[{row.estimator, row.n}].push_back(row.abs_error);
  }
  std::vector<EstimatorSummaryRow> out;
  for (auto& [key, errors] : groups) {
    out.push_back({key.first, key.second, median(errors), mean(errors)});
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean of empty set");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) {
    return 0.0;
  }
  const double m = mean(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of empty set");
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) {
    return *mid;
  }
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs >= 2 paired points");
  }
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::domain_error("log-log fit needs positive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

unsigned worker_count() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BANDIT_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) {
      threads = std::min(threads, static_cast<unsigned>(cap));
    }
  }
  return threads;
}

RegretTrace run_bandit_job(const ExperimentConfig& config, std::string_view algorithm,
                           std::uint64_t seed) {
  Rng rng = make_stream(seed, algorithm, config.instance);
  const double delta = config.resolved_delta();
  if (algorithm == "heavy-qucb" || algorithm == "robust-ucb") {
    const auto instance = build_instance(parse_mab_kind(config.instance), config.v);
    if (algorithm == "heavy-qucb") {
      return heavy_qucb(instance, config.T, {config.C, delta, config.checkpoints}, rng, seed)
          .trace;
    }
    return robust_ucb(instance, config.T, {delta, config.checkpoints}, rng, seed).trace;
  }
  const auto instance = build_slb_instance(parse_slb_kind(config.instance), config.v);
  if (algorithm == "heavy-qlinucb") {
    const HeavyQlinucbOptions options{config.C, config.lambda, delta, config.tight_radius,
                                      config.checkpoints};
    return heavy_qlinucb(instance, config.T, options, rng, seed).trace;
  }
  if (algorithm == "linucb") {
    return linucb(instance, config.T, {config.lambda, delta, config.checkpoints}, rng, seed)
        .trace;
  }
  throw ConfigError("field 'algorithms': unknown algorithm '" + std::string(algorithm) + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads,
                                const std::atomic<bool>* stop) {
  config.validate();
  if (threads == 0) {
    threads = worker_count();
  }
  ExperimentResult result;
  result.config = config;
  const std::string experiment(to_string(config.kind));
  const double delta = config.resolved_delta();

  if (config.kind == ExperimentKind::estimator_bench) {
    struct BenchJob {
      std::string estimator;
      std::int64_t n;
      int trial;
    };
    std::vector<BenchJob> jobs;
    for (const auto& estimator : config.algorithms) {
      for (auto n : bench_grid(config)) {
        for (int trial = 0; trial < config.repeats; ++trial) {
          jobs.push_back({estimator, n, trial});
        }
      }
    }
    std::vector<std::optional<EstimatorRow>> slots(jobs.size());
    run_pool(jobs.size(), threads, stop, [&](std::size_t i) {
      const auto& job = jobs[i];
      const std::string stream = config.instance + "/n=" + std::to_string(job.n);
      Rng rng = make_stream(config.seed + static_cast<std::uint64_t>(job.trial),
                            job.estimator, stream);
      slots[i] = EstimatorRow{experiment, config.instance, job.estimator, config.v, delta,
                              job.n, job.trial, bench_error(config, job.estimator, job.n, rng)};
    });
    for (auto& slot : slots) {
      if (slot) result.estimates.push_back(std::move(*slot));
      else result.interrupted = true;
    }
    std::sort(result.estimates.begin(), result.estimates.end(),
              [](const EstimatorRow& a, const EstimatorRow& b) {
                return std::tie(a.estimator, a.n, a.trial) < std::tie(b.estimator, b.n, b.trial);
              });
    return result;
  }

  struct Job {
    std::string algorithm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& algorithm : config.algorithms) {
    for (int r = 0; r < config.repeats; ++r) {
      jobs.push_back({algorithm, config.seed + static_cast<std::uint64_t>(r)});
    }
  }
  std::vector<std::optional<TraceRecord>> slots(jobs.size());
  run_pool(jobs.size(), threads, stop, [&](std::size_t i) {
    const auto& job = jobs[i];
    slots[i] = TraceRecord{experiment, config.instance, job.algorithm, config.v, delta,
                           run_bandit_job(config, job.algorithm, job.seed)};
  });
  for (auto& slot : slots) {
    if (slot) result.traces.push_back(std::move(*slot));
    else result.interrupted = true;
  }
  std::sort(result.traces.begin(), result.traces.end(),
            [](const TraceRecord& a, const TraceRecord& b) {
              return std::tie(a.algorithm, a.trace.seed) < std::tie(b.algorithm, b.trace.seed);
            });
  return result;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string traces_to_csv(std::span<const TraceRecord> traces) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : traces) {
    const std::string prefix = r.experiment + "," + r.instance + "," + r.algorithm + "," +
                               format_double(r.v) + "," + format_double(r.delta) + "," +
                               std::to_string(r.trace.seed) + ",";
    for (const auto& cp : r.trace.checkpoints) {
      out += prefix;
      out += std::to_string(cp.round);
      out += ',';
      out += format_double(cp.cum_regret);
      out += '\n';
    }
  }
  return out;
}

std::string queries_to_csv(std::span<const TraceRecord> traces) {
  std::string out(kQueriesHeader);
  out += '\n';
  for (const auto& r : traces) {
    out += r.algorithm + "," + std::to_string(r.trace.seed) + "," +
           std::to_string(r.trace.queries_actual) + "," +
           std::to_string(r.trace.queries_declared) + "\n";
  }
  return out;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += row.algorithm + "," + format_double(row.mean_final_regret) + "," +
           format_double(row.std_final_regret) + "," + format_double(row.mean_queries) + "\n";
  }
  return out;
}

std::string estimates_to_csv(std::span<const EstimatorRow> rows) {
  std::string out(kEstimatorHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.experiment + "," + r.instance + "," + r.estimator + "," + format_double(r.v) +
           "," + format_double(r.delta) + "," + std::to_string(r.n) + "," +
           std::to_string(r.trial) + "," + format_double(r.abs_error) + "\n";
  }
  return out;
}

std::string estimator_summary_to_csv(std::span<const EstimatorSummaryRow> rows) {
  std::string out(kEstimatorSummaryHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.estimator + "," + std::to_string(r.n) + "," + format_double(r.median_abs_error) +
           "," + format_double(r.mean_abs_error) + "\n";
  }
  return out;
}

std::vector<TraceRecord> traces_from_csv(std::string_view csv, std::string_view queries_csv) {
  std::vector<TraceRecord> traces;
  for (const auto& f : csv_rows(csv, kTraceHeader)) {
    const std::string algorithm(f[2]);
    const auto seed = static_cast<std::uint64_t>(parse_integer("seed", f[5]));
    if (traces.empty() || traces.back().algorithm != algorithm ||
        traces.back().trace.seed != seed) {
      TraceRecord record;
      record.experiment = std::string(f[0]);
      record.instance = std::string(f[1]);
      record.algorithm = algorithm;
      record.v = parse_real("v", f[3]);
      record.delta = parse_real("delta", f[4]);
      record.trace.seed = seed;
      traces.push_back(std::move(record));
    }
    traces.back().trace.checkpoints.push_back(
        {parse_integer("round", f[6]), parse_real("cum_regret", f[7])});
  }
  if (!queries_csv.empty()) {
    for (const auto& f : csv_rows(queries_csv, kQueriesHeader)) {
      const auto seed = static_cast<std::uint64_t>(parse_integer("seed", f[1]));
      for (auto& record : traces) {
        if (record.algorithm == f[0] && record.trace.seed == seed) {
          record.trace.queries_actual =
              static_cast<std::uint64_t>(parse_integer("queries_actual", f[2]));
          record.trace.queries_declared =
              static_cast<std::uint64_t>(parse_integer("queries_declared", f[3]));
        }
      }
    }
  }
  return traces;
}

std::vector<EstimatorRow> estimates_from_csv(std::string_view csv) {
  std::vector<EstimatorRow> rows;
  for (const auto& f : csv_rows(csv, kEstimatorHeader)) {
    rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]),
                    parse_real("v", f[3]), parse_real("delta", f[4]),
                    parse_integer("n", f[5]), static_cast<int>(parse_integer("trial", f[6])),
                    parse_real("abs_error", f[7])});
  }
  return rows;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = result.config.output_stem();
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& content) {
    const auto path = dir / (stem + suffix);
    write_file(path, content);
    written.push_back(path);
  };
  if (result.config.kind == ExperimentKind::estimator_bench) {
    emit(".csv", estimates_to_csv(result.estimates));
    if (!result.estimates.empty()) {
      emit("_summary.csv", estimator_summary_to_csv(summarize_estimators(result.estimates)));
    }
    return written;
  }
  emit(".csv", traces_to_csv(result.traces));
  emit("_queries.csv", queries_to_csv(result.traces));
  if (!result.traces.empty()) {
    emit("_summary.csv", summary_to_csv(summarize(result.traces)));
  }
  return written;
}

std::string format_summary(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "algorithm" << std::right << std::setw(6) << "runs"
      << std::setw(22) << "mean final regret" << std::setw(16) << "std"
      << std::setw(18) << "mean queries" << '\n';
  for (const auto& row : rows) {
    out << std::left << std::setw(16) << row.algorithm << std::right << std::setw(6)
        << row.runs << std::setw(22) << std::setprecision(6) << row.mean_final_regret
        << std::setw(16) << row.std_final_regret << std::setw(18) << row.mean_queries
        << '\n';
  }
  return out.str();
}

std::string format_estimator_summary(std::span<const EstimatorSummaryRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "estimator" << std::right << std::setw(8) << "n"
      << std::setw(20) << "median |error|" << std::setw(20) << "mean |error|" << '\n';
  struct Fit {
    std::vector<double> n, mean_error, median_error;
  };
  std::map<std::string, Fit> fits;
  for (const auto& row : rows) {
    out << std::left << std::setw(16) << row.estimator << std::right << std::setw(8) << row.n
        << std::setw(20) << std::setprecision(6) << row.median_abs_error << std::setw(20)
        << row.mean_abs_error << '\n';
    auto& fit = fits[row.estimator];
    fit.n.push_back(static_cast<double>(row.n));
    fit.mean_error.push_back(row.mean_abs_error);
    fit.median_error.push_back(row.median_abs_error);
  }
  for (const auto& [estimator, fit] : fits) {
    if (fit.n.size() >= 2) {
      out << estimator << " log-log slope vs n: mean |error| " << std::setprecision(4)
          << loglog_slope(fit.n, fit.mean_error) << ", median |error| "
          << loglog_slope(fit.n, fit.median_error) << '\n';
    }
  }
  return out.str();
}

}  // namespace bandit_lab
