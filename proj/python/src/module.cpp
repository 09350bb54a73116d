#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bandit_lab/amplitude.hpp"
#include "bandit_lab/estimators.hpp"
#include "bandit_lab/harness.hpp"
#include "bandit_lab/mab.hpp"
#include "bandit_lab/slb.hpp"

namespace py = pybind11;
using namespace bandit_lab;

namespace {

std::vector<std::int64_t> ae_outcomes(double amplitude, std::int64_t grover_count, int count,
                                      std::uint64_t seed) {
  Rng rng(seed);
  QueryCounter counter;
  const AmplitudeQuery query{amplitude, grover_count};
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  for (auto& y : out) y = ae_sample_outcome(query, rng, counter);
  return out;
}

py::dict qtme_pareto(double alpha, double scale, double shift, double v, std::int64_t n,
                     double delta, double c, std::uint64_t seed) {
  const ParetoModel model{alpha, scale, shift};
  const RewardModel law(model);
  const MomentBound bound{v, shift == 0.0 ? u_bound(model, v) : law.raw_moment(1.0 + v)};
  OracleHandle oracle(law);
  Rng rng(seed);
  const double estimate = qtme(oracle, make_estimator_config(bound, n, delta, c), rng);
  py::dict out;
  out["estimate"] = estimate;
  out["mean"] = law.mean();
  out["queries_actual"] = oracle.queries_actual();
  out["queries_declared"] = oracle.queries_declared();
  return out;
}

std::vector<EpochRecord> to_history(const std::vector<std::tuple<Vector, double, double>>& rows) {
  std::vector<EpochRecord> history;
  history.reserve(rows.size());
  for (const auto& [action, reward, epsilon] : rows) history.push_back({action, reward, epsilon});
  return history;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulator for quantum heavy-tailed bandits";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("ae_pmf", &ae_pmf, py::arg("amplitude"), py::arg("grover_count"),
        "Amplitude-estimation outcome distribution over y = 0..M-1.");
  m.def("ae_estimate", &ae_estimate, py::arg("outcome"), py::arg("grover_count"));
  m.def("ae_outcomes", &ae_outcomes, py::arg("amplitude"), py::arg("grover_count"),
        py::arg("count"), py::arg("seed") = 0);
  m.def(
      "qme",
      [](double amplitude, std::int64_t t, double delta, std::uint64_t seed) {
        Rng rng(seed);
        QueryCounter counter;
        const double estimate = qme(amplitude, QmeConfig::from_delta(t, delta), rng, counter);
        return py::make_tuple(estimate, counter.actual);
      },
      py::arg("amplitude"), py::arg("t"), py::arg("delta"), py::arg("seed") = 0,
      "Median of AE passes; returns (estimate, queries).");
  m.def("qme_error_bound", &qme_error_bound, py::arg("amplitude"), py::arg("t"),
        py::arg("delta"), py::arg("constant") = kQmeErrorConstant);

  m.def("pareto_mean", [](double alpha, double scale, double shift) {
    return pareto_mean({alpha, scale, shift});
  }, py::arg("alpha"), py::arg("scale"), py::arg("shift") = 0.0);
  m.def("u_bound", [](double alpha, double scale, double v) {
    return u_bound({alpha, scale, 0.0}, v);
  }, py::arg("alpha"), py::arg("scale"), py::arg("v"));
  m.def("default_truncation", [](double v, double u, std::int64_t n, double delta) {
    return default_truncation({v, u}, n, delta);
  }, py::arg("v"), py::arg("u"), py::arg("n"), py::arg("delta"));
  m.def("qtme_pareto", &qtme_pareto, py::arg("alpha"), py::arg("scale"), py::arg("shift") = 0.0,
        py::arg("v") = 0.5, py::arg("n") = 64, py::arg("delta") = 0.05, py::arg("c") = 1.0,
        py::arg("seed") = 0,
        "One QTME call on a Pareto arm; returns estimate, true mean and query counts.");
  m.def(
      "truncated_mean",
      [](const std::vector<double>& samples, double v, double u, double delta) {
        const auto r = classical_truncated_mean(samples, {v, u}, delta);
        return py::make_tuple(r.estimate, r.radius);
      },
      py::arg("samples"), py::arg("v"), py::arg("u"), py::arg("delta"),
      "Classical truncated empirical mean; returns (estimate, radius).");

  py::class_<RegretTrace>(m, "RegretTrace")
      .def_property_readonly("checkpoints",
                             [](const RegretTrace& t) {
                               std::vector<std::pair<std::int64_t, double>> out;
                               for (const auto& c : t.checkpoints) out.emplace_back(c.round, c.cum_regret);
                               return out;
                             })
      .def_readonly("seed", &RegretTrace::seed)
      .def_readonly("queries_actual", &RegretTrace::queries_actual)
      .def_readonly("queries_declared", &RegretTrace::queries_declared)
      .def_property_readonly("final_regret", &RegretTrace::final_regret);

  m.def("instance_means", [](const std::string& name) {
    return instance_means(parse_mab_kind(name));
  }, py::arg("instance"));
  m.def(
      "heavy_qucb",
      [](const std::string& instance, double v, std::int64_t horizon, double c, double delta,
         std::uint64_t seed) {
        Rng rng(make_stream(seed, "heavy-qucb", instance));
        return heavy_qucb(build_instance(parse_mab_kind(instance), v), horizon, {c, delta}, rng,
                          seed)
            .trace;
      },
      py::arg("instance") = "S1", py::arg("v") = 0.5, py::arg("T") = 100000, py::arg("c") = 1.0,
      py::arg("delta") = 1e-5, py::arg("seed") = 0);
  m.def(
      "robust_ucb",
      [](const std::string& instance, double v, std::int64_t horizon, double delta,
         std::uint64_t seed) {
        Rng rng(make_stream(seed, "robust-ucb", instance));
        return robust_ucb(build_instance(parse_mab_kind(instance), v), horizon, {delta}, rng, seed)
            .trace;
      },
      py::arg("instance") = "S1", py::arg("v") = 0.5, py::arg("T") = 100000,
      py::arg("delta") = 1e-5, py::arg("seed") = 0);
  m.def(
      "heavy_qlinucb",
      [](const std::string& instance, double v, std::int64_t horizon, double c, double lambda,
         double delta, bool tight_radius, std::uint64_t seed) {
        Rng rng(make_stream(seed, "heavy-qlinucb", instance));
        const auto run = heavy_qlinucb(build_slb_instance(parse_slb_kind(instance), v), horizon,
                                       {c, lambda, delta, tight_radius}, rng, seed);
        return py::make_tuple(run.trace, run.covered(), run.epochs.size());
      },
      py::arg("instance") = "theta1", py::arg("v") = 1.0, py::arg("T") = 100000,
      py::arg("c") = 0.5, py::arg("lam") = 1.0, py::arg("delta") = 0.1,
      py::arg("tight_radius") = false, py::arg("seed") = 0,
      "Returns (trace, covered, epoch_count).");
  m.def(
      "linucb",
      [](const std::string& instance, double v, std::int64_t horizon, double lambda,
         double delta, std::uint64_t seed) {
        Rng rng(make_stream(seed, "linucb", instance));
        return linucb(build_slb_instance(parse_slb_kind(instance), v), horizon, {lambda, delta},
                      rng, seed)
            .trace;
      },
      py::arg("instance") = "theta1", py::arg("v") = 1.0, py::arg("T") = 100000,
      py::arg("lam") = 1.0, py::arg("delta") = 0.1, py::arg("seed") = 0);

  m.def(
      "wls_update",
      [](const std::vector<std::tuple<Vector, double, double>>& history, double lambda,
         std::int64_t d) {
        const auto fit = wls_update(to_history(history), lambda, d);
        return py::make_tuple(fit.theta_hat, fit.V);
      },
      py::arg("history"), py::arg("lam"), py::arg("d"),
      "history: list of (action, reward, epsilon); returns (theta_hat, V).");
  m.def("confidence_radius", &confidence_radius, py::arg("s"), py::arg("lam"), py::arg("S"),
        py::arg("d"));
  m.def("epoch_bound", &epoch_bound, py::arg("d"), py::arg("L"), py::arg("T"), py::arg("lam"),
        py::arg("v"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("kind", [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); })
      .def_readwrite("instance", &ExperimentConfig::instance)
      .def_readwrite("v", &ExperimentConfig::v)
      .def_readwrite("T", &ExperimentConfig::T)
      .def_readwrite("C", &ExperimentConfig::C)
      .def_readwrite("repeats", &ExperimentConfig::repeats)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("algorithms", &ExperimentConfig::algorithms)
      .def_property_readonly("delta", &ExperimentConfig::resolved_delta)
      .def("set", [](ExperimentConfig& c, const std::string& key, const std::string& value) {
        apply_setting(c, key, value);
      }, py::arg("key"), py::arg("value"))
      .def("validate", &ExperimentConfig::validate);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<config>");

  m.def(
      "run_experiment",
      [](const ExperimentConfig& config, unsigned threads) {
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(config, threads);
        }
        py::dict out;
        if (config.kind == ExperimentKind::estimator_bench) {
          py::list rows;
          for (const auto& r : summarize_estimators(result.estimates)) {
            rows.append(py::dict(py::arg("estimator") = r.estimator, py::arg("n") = r.n,
                                 py::arg("median_abs_error") = r.median_abs_error,
                                 py::arg("mean_abs_error") = r.mean_abs_error));
          }
          out["summary"] = rows;
          out["csv"] = estimates_to_csv(result.estimates);
        } else {
          py::list rows;
          for (const auto& r : summarize(result.traces)) {
            rows.append(py::dict(py::arg("algorithm") = r.algorithm,
                                 py::arg("mean_final_regret") = r.mean_final_regret,
                                 py::arg("std_final_regret") = r.std_final_regret,
                                 py::arg("mean_queries") = r.mean_queries,
                                 py::arg("runs") = r.runs));
          }
          out["summary"] = rows;
          out["csv"] = traces_to_csv(result.traces);
        }
        return out;
      },
      py::arg("config"), py::arg("threads") = 0,
      "Runs all repeats; returns {'summary': [...], 'csv': str}.");
}
