#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srlr/csv.hpp"
#include "srlr/diagnostics.hpp"
#include "srlr/rng.hpp"
#include "srlr/selection.hpp"
#include "srlr/simulation.hpp"

namespace py = pybind11;
using namespace srlr;

PYBIND11_MODULE(_srlr, m) {
  m.doc() = "sparse linear regression robust to response outliers";

  py::class_<ThresholdingRule>(m, "ThresholdingRule")
      .def_static("parse", &ThresholdingRule::parse, py::arg("spec"))
      .def_property_readonly("name", &ThresholdingRule::name)
      .def_readonly("shape_param", &ThresholdingRule::shape_param)
      .def("__repr__", [](const ThresholdingRule& r) { return "<rule " + r.name() + ">"; });

  m.def("theta", [](const std::string& rule, double z, double lambda) {
    return theta(ThresholdingRule::parse(rule), z, lambda);
  }, py::arg("rule"), py::arg("z"), py::arg("lam"));
  m.def("psi", [](const std::string& rule, double z, double lambda) {
    return psi(ThresholdingRule::parse(rule), z, lambda);
  }, py::arg("rule"), py::arg("z"), py::arg("lam"));
  m.def("penalty", [](const std::string& rule, double t, double lambda) {
    return penalty(ThresholdingRule::parse(rule), t, lambda);
  }, py::arg("rule"), py::arg("t"), py::arg("lam"));
  m.def("robust_loss", [](const std::string& rule, double z, double lambda) {
    return robust_loss(ThresholdingRule::parse(rule), z, lambda);
  }, py::arg("rule"), py::arg("z"), py::arg("lam"));
  m.def("check_condition2", [](const std::string& rule, long samples) {
    const auto r = check_condition2(ThresholdingRule::parse(rule), samples);
    py::dict d;
    d["pass"] = r.pass;
    d["worst_zero_slack"] = r.worst_zero_slack;
    d["worst_proximity_slack"] = r.worst_proximity_slack;
    d["witness_z"] = r.witness_z;
    d["witness_lambda"] = r.witness_lambda;
    d["samples"] = r.samples;
    return d;
  }, py::arg("rule"), py::arg("samples") = 10000);

  py::class_<Dataset>(m, "Dataset")
      .def_static("from_raw", &Dataset::from_raw, py::arg("X"), py::arg("y"))
      .def_static("from_normalized", &Dataset::from_normalized, py::arg("X"), py::arg("y"))
      .def_readonly("y", &Dataset::y)
      .def_readonly("X", &Dataset::X)
      .def_readonly("column_scales", &Dataset::column_scales)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p);

  m.def("normalize_columns", &normalize_columns, py::arg("X"));
  m.def("load_csv",
        [](const std::string& path, const std::string& response, bool has_header) {
          return load_csv(path, response, has_header);
        },
        py::arg("path"), py::arg("response"), py::arg("has_header") = true);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("max_iter", &SolverOptions::max_iter)
      .def_readwrite("active_set", &SolverOptions::active_set);

  py::class_<LassoSolution>(m, "LassoSolution")
      .def_readonly("coef", &LassoSolution::coef)
      .def_readonly("sweeps", &LassoSolution::sweeps)
      .def_readonly("converged", &LassoSolution::converged);

  m.def("solve_weighted_lasso",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
           const Eigen::VectorXd& w, const SolverOptions& opts) {
          return solve_weighted_lasso(X, y, lambda, w, nullptr, opts);
        },
        py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("w"),
        py::arg("opts") = SolverOptions{});
  m.def("kkt_residual", &kkt_residual, py::arg("X"), py::arg("y"), py::arg("b"), py::arg("lam"),
        py::arg("w"));
  m.def("lambda_grid",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
           int count, double min_ratio) { return lambda_grid(X, y, w, count, min_ratio); },
        py::arg("X"), py::arg("y"), py::arg("w"), py::arg("count"), py::arg("min_ratio") = 1e-3);

  py::class_<PreliminaryFit>(m, "PreliminaryFit")
      .def_readonly("beta_tilde", &PreliminaryFit::beta_tilde)
      .def_readonly("gamma_tilde", &PreliminaryFit::gamma_tilde)
      .def_readonly("S_tilde", &PreliminaryFit::S_tilde)
      .def_readonly("G_tilde", &PreliminaryFit::G_tilde)
      .def_readonly("lambda_theta", &PreliminaryFit::lambda_theta)
      .def_readonly("tau_theta", &PreliminaryFit::tau_theta)
      .def_readonly("thresholded", &PreliminaryFit::thresholded)
      .def_readonly("note", &PreliminaryFit::note);

  m.def("fit_preliminary",
        [](const Dataset& d, double lambda_theta, const SolverOptions& opts) {
          return fit_preliminary(d, lambda_theta, opts);
        },
        py::arg("data"), py::arg("lambda_theta"), py::arg("opts") = SolverOptions{});
  m.def("threshold_preliminary", &threshold_preliminary, py::arg("fit"), py::arg("tau_theta"));
  m.def("select_preliminary",
        [](const Dataset& d, const std::vector<double>& grid_lambda,
           const std::vector<double>& grid_tau, bool use_threshold) {
          return select_preliminary(d, grid_lambda, grid_tau, use_threshold);
        },
        py::arg("data"), py::arg("grid_lambda_theta"), py::arg("grid_tau_theta"),
        py::arg("use_threshold") = false);
  m.def("preliminary_lambda_grid", &preliminary_lambda_grid, py::arg("data"), py::arg("count"),
        py::arg("min_ratio") = 1e-2);

  py::class_<TuningParams>(m, "TuningParams")
      .def(py::init<>())
      .def_readwrite("lambda_beta", &TuningParams::lambda_beta)
      .def_readwrite("lambda_gamma", &TuningParams::lambda_gamma)
      .def_readwrite("lambda_theta", &TuningParams::lambda_theta)
      .def_readwrite("tau_theta", &TuningParams::tau_theta);

  py::class_<Weights>(m, "Weights")
      .def_readonly("support_beta", &Weights::support_beta)
      .def_readonly("w_beta", &Weights::w_beta)
      .def_readonly("support_gamma", &Weights::support_gamma)
      .def_readonly("w_gamma", &Weights::w_gamma)
      .def_readonly("r_w", &Weights::r_w);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("beta", &FitResult::beta)
      .def_readonly("gamma", &FitResult::gamma)
      .def_readonly("support_beta", &FitResult::support_beta)
      .def_readonly("support_gamma", &FitResult::support_gamma)
      .def_readonly("objective_trace", &FitResult::objective_trace)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("tuning", &FitResult::tuning)
      .def_readonly("rule_name", &FitResult::rule_name)
      .def_readonly("bic", &FitResult::bic);

  m.def("compute_weights", &compute_weights, py::arg("prelim"), py::arg("r_w") = 100.0);
  m.def("gamma_step",
        [](const Eigen::VectorXd& residuals, const std::string& rule, double lambda_gamma,
           const Weights& w) {
          return gamma_step(residuals, ThresholdingRule::parse(rule), lambda_gamma, w);
        },
        py::arg("residuals"), py::arg("rule"), py::arg("lambda_gamma"), py::arg("weights"));
  m.def("objective",
        [](const Dataset& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
           const std::string& rule, const Weights& w, const TuningParams& t) {
          return objective(d, beta, gamma, ThresholdingRule::parse(rule), w, t);
        },
        py::arg("data"), py::arg("beta"), py::arg("gamma"), py::arg("rule"), py::arg("weights"),
        py::arg("tuning"));
  m.def("fit",
        [](const Dataset& d, const PreliminaryFit& prelim, const std::string& rule,
           const TuningParams& t, double r_w, double stop_tol, int max_outer) {
          RobustOptions opts;
          opts.stop_tol = stop_tol;
          opts.max_outer = max_outer;
          return fit(d, prelim, ThresholdingRule::parse(rule), t, r_w, nullptr, opts);
        },
        py::arg("data"), py::arg("prelim"), py::arg("rule"), py::arg("tuning"),
        py::arg("r_w") = 100.0, py::arg("stop_tol") = 1e-3, py::arg("max_outer") = 100);
  m.def("estimating_equation_residual",
        [](const Dataset& d, const FitResult& fr, const std::string& rule,
           const TuningParams& t, const Weights& w) {
          return estimating_equation_residual(d, fr, ThresholdingRule::parse(rule), t, w);
        },
        py::arg("data"), py::arg("fit"), py::arg("rule"), py::arg("tuning"), py::arg("weights"));

  m.def("bic_score", &bic_score, py::arg("data"), py::arg("beta"), py::arg("gamma"));
  m.def("select_fit",
        [](const Dataset& d, const PreliminaryFit& prelim, const std::string& rule,
           const std::vector<double>& grid_beta, const std::vector<double>& grid_gamma,
           double r_w) {
          return select_fit(d, prelim, ThresholdingRule::parse(rule), grid_beta, grid_gamma, r_w);
        },
        py::arg("data"), py::arg("prelim"), py::arg("rule"), py::arg("grid_beta"),
        py::arg("grid_gamma"), py::arg("r_w") = 100.0);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("fit", &PipelineResult::fit)
      .def_readonly("prelim", &PipelineResult::prelim)
      .def_readonly("grid_lambda_beta", &PipelineResult::grid_lambda_beta)
      .def_readonly("grid_lambda_gamma", &PipelineResult::grid_lambda_gamma)
      .def_readonly("grid_lambda_theta", &PipelineResult::grid_lambda_theta);

  m.def("full_pipeline",
        [](const Dataset& d, const std::string& rule, int grid_size, double r_w,
           bool threshold_prelim) {
          PipelineConfig config;
          config.grid_size = grid_size;
          config.r_w = r_w;
          config.threshold_prelim = threshold_prelim;
          return full_pipeline(d, ThresholdingRule::parse(rule), config);
        },
        py::arg("data"), py::arg("rule"), py::arg("grid_size") = 20, py::arg("r_w") = 100.0,
        py::arg("threshold_prelim") = false);

  m.def("restricted_min_eigenvalue", &restricted_min_eigenvalue, py::arg("X"), py::arg("u"));
  m.def("restricted_max_eigenvalue", &restricted_max_eigenvalue, py::arg("X"), py::arg("u"),
        py::arg("u_prime"));
  m.def("contraction_factor", &contraction_factor, py::arg("X"), py::arg("s_tilde"),
        py::arg("g_tilde"), py::arg("kappa"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("n", &Scenario::n)
      .def_readwrite("p", &Scenario::p)
      .def_readwrite("s_star", &Scenario::s_star)
      .def_readwrite("g_star", &Scenario::g_star)
      .def_readwrite("outlier_magnitude", &Scenario::outlier_magnitude)
      .def_readwrite("rho_cov", &Scenario::rho_cov)
      .def_readwrite("sigma", &Scenario::sigma)
      .def_readwrite("seed", &Scenario::seed);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("beta_star", &GroundTruth::beta_star)
      .def_readonly("gamma_star", &GroundTruth::gamma_star)
      .def_readonly("S_star", &GroundTruth::S_star)
      .def_readonly("G_star", &GroundTruth::G_star);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("sq_l2_error", &Metrics::sq_l2_error)
      .def_readonly("fp", &Metrics::fp)
      .def_readonly("tp", &Metrics::tp)
      .def_readonly("support_size_prelim", &Metrics::support_size_prelim)
      .def_readonly("coverage", &Metrics::coverage);

  m.def("generate", &generate, py::arg("scenario"));
  m.def("evaluate",
        [](const Eigen::VectorXd& beta, const GroundTruth& truth) {
          return evaluate(beta, nullptr, truth);
        },
        py::arg("fit_beta"), py::arg("truth"));
  m.def("evaluate_with_prelim",
        [](const Eigen::VectorXd& beta, const PreliminaryFit& prelim, const GroundTruth& truth) {
          return evaluate(beta, &prelim, truth);
        },
        py::arg("fit_beta"), py::arg("prelim"), py::arg("truth"));
  m.def("lasso_baseline", &lasso_baseline, py::arg("data"), py::arg("grid_size") = 20);
  m.def("oracle_baseline", &oracle_baseline, py::arg("data"), py::arg("truth"),
        py::arg("grid_size") = 20);

  py::class_<SummaryRow>(m, "SummaryRow")
      .def_readonly("prelim", &SummaryRow::prelim)
      .def_readonly("outlier_pct", &SummaryRow::outlier_pct)
      .def_readonly("rule", &SummaryRow::rule)
      .def_readonly("sq_l2_error", &SummaryRow::sq_l2_error)
      .def_readonly("fp", &SummaryRow::fp)
      .def_readonly("tp", &SummaryRow::tp)
      .def_readonly("support_size", &SummaryRow::support_size)
      .def_readonly("coverage", &SummaryRow::coverage);

  py::class_<MonteCarloSummary>(m, "MonteCarloSummary")
      .def_readonly("rows", &MonteCarloSummary::rows)
      .def_readonly("replications", &MonteCarloSummary::replications)
      .def_readonly("failures", &MonteCarloSummary::failures);

  m.def("run_monte_carlo",
        [](const Scenario& sc, int replications, const std::vector<std::string>& rules,
           const std::vector<std::string>& variants, int jobs, int grid_size,
           bool include_baselines) {
          std::vector<ThresholdingRule> parsed;
          for (const auto& r : rules) parsed.push_back(ThresholdingRule::parse(r));
          MonteCarloConfig cfg;
          cfg.jobs = jobs;
          cfg.pipeline.grid_size = grid_size;
          cfg.include_baselines = include_baselines;
          return run_monte_carlo(sc, replications, parsed, variants, cfg);
        },
        py::arg("scenario"), py::arg("replications"), py::arg("rules"),
        py::arg("prelim_variants"), py::arg("jobs") = 1, py::arg("grid_size") = 20,
        py::arg("include_baselines") = true);
  m.def("summary_to_csv", [](const MonteCarloSummary& s) { return summary_to_csv(s.rows); });

  m.def("mix_seed", &mix_seed, py::arg("master"), py::arg("index"));
}
