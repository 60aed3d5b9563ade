#include "srlr/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "srlr/csv.hpp"
#include "srlr/diagnostics.hpp"
#include "srlr/rng.hpp"
#include "srlr/selection.hpp"
#include "srlr/simulation.hpp"

namespace srlr::cli {

namespace {

using nlohmann::json;

std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("SRLR_OUT_DIR"); dir && *dir)
    return (std::filesystem::path(dir) / p).string();
  return path;
}

void write_file(const std::string& path, const std::string& content) {
  const std::string full = resolve_out(path);
  if (auto parent = std::filesystem::path(full).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(full, std::ios::binary);
  if (!out) throw std::runtime_error("could not write '" + full + "'");
  out << content;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ThresholdingRule parse_rule_arg(const std::string& spec) {
  return ThresholdingRule::parse(spec);  // throws with the valid-name list
}

// ---------------------------------------------------------------- fit ----

struct FitArgs {
  std::string input;
  std::string response;
  std::string rule = "soft";
  double r_w = 100.0;
  std::string prelim = "pre";
  int grid_size = 20;
  std::uint64_t seed = 0;
  std::string out;
  bool no_header = false;
};

int cmd_fit(const FitArgs& a) {
  const ThresholdingRule rule = parse_rule_arg(a.rule);
  std::vector<std::string> covariate_names;
  std::string response_name;
  const Dataset data = load_csv(a.input, a.response, !a.no_header, covariate_names, response_name);

  PipelineConfig config;
  config.grid_size = a.grid_size;
  config.r_w = a.r_w;
  config.threshold_prelim = (a.prelim == "thpre");
  const PipelineResult result = full_pipeline(data, rule, config);

  const Weights weights = compute_weights(result.prelim, a.r_w);
  const double ee = estimating_equation_residual(data, result.fit, rule, result.fit.tuning, weights);
  const double sqrt_n = std::sqrt(static_cast<double>(data.n()));

  json report;
  report["rule"] = rule.name();
  report["r_w"] = a.r_w;
  report["seed"] = a.seed;
  report["n"] = data.n();
  report["p"] = data.p();
  report["response"] = response_name;
  report["covariates"] = covariate_names;
  report["beta_normalized"] = std::vector<double>(result.fit.beta.data(),
                                                  result.fit.beta.data() + result.fit.beta.size());
  const Eigen::VectorXd beta_orig = result.fit.beta.cwiseProduct(data.column_scales);
  report["beta_original_units"] =
      std::vector<double>(beta_orig.data(), beta_orig.data() + beta_orig.size());
  report["gamma"] = std::vector<double>(result.fit.gamma.data(),
                                        result.fit.gamma.data() + result.fit.gamma.size());
  report["support_beta"] = result.fit.support_beta;
  report["support_gamma"] = result.fit.support_gamma;
  report["tuning"] = {{"lambda_beta", result.fit.tuning.lambda_beta},
                      {"lambda_gamma", result.fit.tuning.lambda_gamma},
                      {"lambda_theta", result.fit.tuning.lambda_theta},
                      {"tau_theta", result.fit.tuning.tau_theta}};
  report["bic"] = result.fit.bic;
  report["iterations"] = result.fit.iterations;
  report["converged"] = result.fit.converged;
  report["objective_trace"] = result.fit.objective_trace;
  report["estimating_equation_residual"] = ee;
  report["prelim"] = {{"variant", a.prelim},
                      {"lambda_theta", result.prelim.lambda_theta},
                      {"tau_theta", result.prelim.tau_theta},
                      {"support_beta_size", result.prelim.S_tilde.size()},
                      {"support_gamma_size", result.prelim.G_tilde.size()},
                      {"note", result.prelim.note}};
  report["grids"] = {{"lambda_beta", result.grid_lambda_beta},
                     {"lambda_gamma", result.grid_lambda_gamma},
                     {"lambda_theta", result.grid_lambda_theta}};
  // BIC components for round-trip checks.
  report["bic_rss_term"] =
      (data.y - data.X * result.fit.beta - sqrt_n * result.fit.gamma).squaredNorm() /
      (2.0 * static_cast<double>(data.n()));

  const std::string text = report.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return 0;
}

// ---------------------------------------------------------- reproduce ----

struct ReproduceArgs {
  std::string target;
  int reps = 100;
  std::uint64_t seed = 1;
  std::string out = ".";
  int jobs = 1;
  bool full_scale = false;
  int grid_size = 20;
};

std::vector<ThresholdingRule> table_rules() {
  return {ThresholdingRule::soft(), ThresholdingRule::hard(), ThresholdingRule::scad(),
          ThresholdingRule::garrote()};
}

int cmd_reproduce(const ReproduceArgs& a) {
  MonteCarloConfig mc;
  mc.jobs = a.jobs;
  mc.pipeline.grid_size = a.grid_size;
  const std::filesystem::path out_dir(a.out);

  if (a.target == "table1" || a.target == "table2") {
    Scenario base;
    if (a.target == "table1") {
      base.n = 200; base.p = 200; base.s_star = 10;
    } else if (a.full_scale) {
      base.n = 200; base.p = 400; base.s_star = 20;
    } else {
      base.n = 100; base.p = 200; base.s_star = 10;
    }
    base.seed = a.seed;
    std::string csv = summary_csv_header();
    for (int pct : {5, 10, 20, 30}) {
      Scenario sc = base;
      sc.g_star = sc.n * pct / 100;
      const MonteCarloSummary summary =
          run_monte_carlo(sc, a.reps, table_rules(), {"pre", "thpre"}, mc);
      csv += summary_to_csv(summary.rows, false);
    }
    write_file((out_dir / (a.target + ".csv")).string(), csv);
    return 0;
  }

  if (a.target == "figure1") {
    Scenario base;
    base.n = 200; base.p = 200; base.s_star = 10;
    base.seed = a.seed;
    std::string csv = "prelim,outlier_pct,support_size,coverage\n";
    for (int pct : {1, 5, 10, 15, 20, 25, 30, 35}) {
      Scenario sc = base;
      sc.g_star = sc.n * pct / 100;
      for (const std::string variant : {"pre", "thpre"}) {
        std::vector<double> support(static_cast<std::size_t>(a.reps), 0.0);
        std::vector<double> covered(static_cast<std::size_t>(a.reps), 0.0);
        PipelineConfig pc = mc.pipeline;
        pc.threshold_prelim = (variant == "thpre");
        parallel_reps(a.reps, a.jobs, [&](int rep) {
          Scenario rsc = sc;
          rsc.seed = mix_seed(sc.seed, static_cast<std::uint64_t>(rep));
          auto [data, truth] = generate(rsc);
          const auto grid = preliminary_lambda_grid(data, pc.grid_size, pc.prelim_min_ratio);
          const PreliminaryFit prelim =
              select_preliminary(data, grid, pc.tau_grid, pc.threshold_prelim, pc.prelim_solver);
          const Metrics m = evaluate(Eigen::VectorXd::Zero(data.p()), &prelim, truth);
          support[static_cast<std::size_t>(rep)] = m.support_size_prelim;
          covered[static_cast<std::size_t>(rep)] = m.coverage ? 1.0 : 0.0;
        });
        double mean_support = 0.0, mean_cov = 0.0;
        for (int rep = 0; rep < a.reps; ++rep) {
          mean_support += support[static_cast<std::size_t>(rep)];
          mean_cov += covered[static_cast<std::size_t>(rep)];
        }
        mean_support /= a.reps;
        mean_cov /= a.reps;
        csv += std::string(variant) + "," + format_double(pct) + "," +
               format_double(mean_support) + "," + format_double(mean_cov) + "\n";
      }
    }
    write_file((out_dir / "figure1.csv").string(), csv);
    return 0;
  }

  if (a.target == "figure2") {
    Scenario base;
    if (a.full_scale) {
      base.n = 200; base.p = 400; base.s_star = 20; base.g_star = 20;
    } else {
      base.n = 100; base.p = 200; base.s_star = 10; base.g_star = 10;
    }
    base.seed = a.seed;
    mc.include_baselines = false;
    std::string csv = "rule,magnitude,sq_l2_error,fp\n";
    for (int magnitude : {2, 4, 6, 8, 10, 12, 14}) {
      Scenario sc = base;
      sc.outlier_magnitude = magnitude;
      const MonteCarloSummary summary = run_monte_carlo(
          sc, a.reps, {ThresholdingRule::soft(), ThresholdingRule::hard()}, {"pre"}, mc);
      for (const auto& row : summary.rows)
        csv += row.rule + "," + format_double(magnitude) + "," +
               format_double(row.sq_l2_error) + "," + format_double(row.fp) + "\n";
    }
    write_file((out_dir / "figure2.csv").string(), csv);
    return 0;
  }

  throw CLI::ValidationError("reproduce", "unknown target '" + a.target +
                                              "' (expected table1, table2, figure1, figure2)");
}

// -------------------------------------------------------------- curves ----

struct CurvesArgs {
  std::string rule = "soft";
  double lambda = 1.0;
  std::string range = "-5:5:0.1";
  std::string out;
};

int cmd_curves(const CurvesArgs& a) {
  const ThresholdingRule rule = parse_rule_arg(a.rule);
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(a.range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw CLI::ValidationError("curves", "range must be lo:hi:step");
  if (!(step > 0)) throw CLI::ValidationError("curves", "range step must be positive");
  if (hi < lo) throw CLI::ValidationError("curves", "range upper end below lower end");

  std::string csv = "z,theta,psi,Psi\n";
  for (double z = lo; z <= hi + 1e-12 * std::max(1.0, std::abs(hi)); z += step) {
    csv += format_double(z) + "," + format_double(theta(rule, z, a.lambda)) + "," +
           format_double(psi(rule, z, a.lambda)) + "," +
           format_double(robust_loss(rule, z, a.lambda)) + "\n";
  }
  if (a.out.empty())
    std::cout << csv;
  else
    write_file(a.out, csv);
  return 0;
}

// --------------------------------------------------------- diagnostics ----

struct DiagnosticsArgs {
  std::string input;
  std::string response;
  int u = 1;
  int u_prime = 1;
  double kappa = 1.0;
  bool no_header = false;
  std::string out;
};

int cmd_diagnostics(const DiagnosticsArgs& a) {
  const Dataset data = load_csv(a.input, a.response, !a.no_header);
  if (data.p() > 12 || data.n() > 14)
    throw CLI::ValidationError(
        "diagnostics", "guards exceeded: need p <= 12 and n <= 14, got p = " +
                           std::to_string(data.p()) + ", n = " + std::to_string(data.n()));
  const EigenReport report = eigen_report(data.X, a.u, a.u_prime, a.kappa);
  json j;
  j["delta_min"] = report.delta_min;
  j["delta_max"] = report.delta_max;
  j["rho"] = report.rho;
  j["rho_flagged"] = report.rho_flagged;
  j["bound_35"] = report.bound_35;
  j["supports_examined"] = report.supports_examined;
  j["kappa"] = a.kappa;
  j["u"] = a.u;
  j["u_prime"] = a.u_prime;
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"sparse linear regression robust to response outliers"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 usage error, 2 computational error.");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit a CSV dataset with the two-stage pipeline");
  fit_cmd->add_option("--input", fit_args.input, "input CSV path")->required();
  fit_cmd->add_option("--response", fit_args.response, "response column (name or 0-based index)")
      ->required();
  fit_cmd->add_option("--rule", fit_args.rule,
                      "thresholding rule: soft|hard|scad|garrote|mcp, optionally rule:a=<real>");
  fit_cmd->add_option("--rw", fit_args.r_w, "adaptive weight cap R_w")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--prelim", fit_args.prelim, "preliminary variant")
      ->check(CLI::IsMember({"pre", "thpre"}));
  fit_cmd->add_option("--grid-size", fit_args.grid_size, "tuning grid size per parameter")
      ->check(CLI::Range(2, 1000));
  fit_cmd->add_option("--seed", fit_args.seed, "seed recorded in the report");
  fit_cmd->add_option("--out", fit_args.out, "report JSON path (stdout when omitted)");
  fit_cmd->add_flag("--no-header", fit_args.no_header, "CSV has no header row");

  ReproduceArgs rep_args;
  auto* rep_cmd = app.add_subcommand("reproduce", "regenerate study tables/figures as CSV");
  rep_cmd->add_option("target", rep_args.target, "table1|table2|figure1|figure2")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "figure1", "figure2"}));
  rep_cmd->add_option("--reps", rep_args.reps, "Monte Carlo replications")
      ->check(CLI::Range(1, 100000));
  rep_cmd->add_option("--seed", rep_args.seed, "master seed");
  rep_cmd->add_option("--out", rep_args.out, "output directory");
  rep_cmd->add_option("--jobs", rep_args.jobs, "parallel replications")->check(CLI::Range(1, 256));
  rep_cmd->add_flag("--full-scale", rep_args.full_scale,
                    "table2/figure2 at the full design size (slow)");
  rep_cmd->add_option("--grid-size", rep_args.grid_size, "tuning grid size per parameter")
      ->check(CLI::Range(2, 1000));

  CurvesArgs curve_args;
  auto* curve_cmd = app.add_subcommand("curves", "emit theta/psi/Psi curve data");
  curve_cmd->add_option("--rule", curve_args.rule, "thresholding rule");
  curve_cmd->add_option("--lambda", curve_args.lambda, "threshold level")
      ->check(CLI::NonNegativeNumber);
  curve_cmd->add_option("--range", curve_args.range, "grid as lo:hi:step");
  curve_cmd->add_option("--out", curve_args.out, "output CSV path (stdout when omitted)");

  DiagnosticsArgs diag_args;
  auto* diag_cmd =
      app.add_subcommand("diagnostics", "restricted-eigenvalue report (small instances)");
  diag_cmd->add_option("--input", diag_args.input, "input CSV path")->required();
  diag_cmd->add_option("--response", diag_args.response, "response column (name or index)")
      ->required();
  diag_cmd->add_option("--u", diag_args.u, "column support size")->required();
  diag_cmd->add_option("--uprime", diag_args.u_prime, "row subset size")->required();
  diag_cmd->add_option("--kappa", diag_args.kappa, "restricted eigenvalue lower bound")
      ->check(CLI::PositiveNumber);
  diag_cmd->add_flag("--no-header", diag_args.no_header, "CSV has no header row");
  diag_cmd->add_option("--out", diag_args.out, "report JSON path (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_args);
    if (rep_cmd->parsed()) return cmd_reproduce(rep_args);
    if (curve_cmd->parsed()) return cmd_curves(curve_args);
    if (diag_cmd->parsed()) return cmd_diagnostics(diag_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace srlr::cli
