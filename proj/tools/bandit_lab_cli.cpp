// bandit-lab: run bandit experiments from a config file and summarize results.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bandit_lab/harness.hpp"

namespace fs = std::filesystem;
using namespace bandit_lab;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string first_line(const std::string& text) {
  auto line = text.substr(0, text.find('\n'));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int summarize_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "error: " << dir.string() << " is not a directory\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int shown = 0;
  for (const auto& path : files) {
    const std::string text = slurp(path);
    const std::string header = first_line(text);
    if (header == kTraceHeader) {
      fs::path queries = path;
      queries.replace_filename(path.stem().string() + "_queries.csv");
      const std::string queries_text = fs::exists(queries) ? slurp(queries) : std::string();
      const auto traces = traces_from_csv(text, queries_text);
      if (traces.empty()) continue;
      std::cout << "== " << path.filename().string() << " (" << traces.front().experiment
                << ", " << traces.front().instance << ")\n"
                << format_summary(summarize(traces));
      ++shown;
    } else if (header == kEstimatorHeader) {
      const auto rows = estimates_from_csv(text);
      if (rows.empty()) continue;
      std::cout << "== " << path.filename().string() << '\n'
                << format_estimator_summary(summarize_estimators(rows));
      ++shown;
    }
  }
  if (shown == 0) {
    std::cerr << "error: no result CSVs found in " << dir.string() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum heavy-tailed bandit simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::optional<std::string> algorithms;
  std::optional<std::string> instance;
  std::optional<double> v;
  std::optional<std::int64_t> horizon;
  std::optional<unsigned> threads;
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--repeats", repeats, "Independent runs per algorithm");
  run->add_option("--algo", algorithms, "Comma-separated algorithm list");
  run->add_option("--instance", instance, "Instance name");
  run->add_option("--v", v, "Moment order parameter v");
  run->add_option("--T", horizon, "Horizon");
  run->add_option("--threads", threads, "Worker threads (default: hardware, capped by BANDIT_LAB_THREADS)");

  auto* summarize_cmd = app.add_subcommand("summarize", "Print summaries of result CSVs");
  std::string in_dir;
  summarize_cmd->add_option("--in", in_dir, "Directory holding result CSVs")->required();

  CLI11_PARSE(app, argc, argv);

  if (summarize_cmd->parsed()) {
    try {
      return summarize_dir(in_dir);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (repeats) config.repeats = *repeats;
    if (algorithms) apply_setting(config, "algorithms", *algorithms);
    if (instance) config.instance = *instance;
    if (v) config.v = *v;
    if (horizon) config.T = *horizon;
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  std::signal(SIGINT, on_sigint);
  ExperimentResult result;
  try {
    result = run_experiment(config, threads.value_or(0), &g_stop);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  const auto written = write_outputs(result, out_dir);
  for (const auto& path : written) {
    std::cerr << "wrote " << path.string() << '\n';
  }
  if (config.kind == ExperimentKind::estimator_bench) {
    if (!result.estimates.empty()) {
      std::cout << format_estimator_summary(summarize_estimators(result.estimates));
    }
  } else if (!result.traces.empty()) {
    std::cout << format_summary(summarize(result.traces));
  }
  if (result.interrupted) {
    std::cerr << "interrupted: partial results flushed\n";
    return 130;
  }
  return 0;
}
