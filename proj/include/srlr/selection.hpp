#pragma once

#include "srlr/dataset.hpp"
#include "srlr/preliminary.hpp"
#include "srlr/robust.hpp"

namespace srlr {

/// BIC for Algorithm-1 output:
///   (1/2n)||y - X beta - sqrt(n) gamma||^2 + (log n / n)(|supp beta| + |supp gamma|).
double bic_score(const Dataset& data, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma);

/// Runs the robust fit over the (lambda_beta, lambda_gamma) grid product,
/// warm-starting beta across neighboring lambda_beta, and returns the BIC
/// minimizer. Ties break toward larger lambda_beta, then larger lambda_gamma.
/// Throws if every grid point fails to converge (message carries per-point
/// diagnostics).
FitResult select_fit(const Dataset& data, const PreliminaryFit& prelim,
                     const ThresholdingRule& rule, const std::vector<double>& grid_beta,
                     const std::vector<double>& grid_gamma, double r_w,
                     const RobustOptions& opts = {});

/// Default lambda_beta grid: lasso grid on the S~ columns against the working
/// response y - sqrt(n) gamma~, with the adaptive beta weights.
std::vector<double> default_lambda_beta_grid(const Dataset& data, const PreliminaryFit& prelim,
                                             const Weights& weights, int count);

/// Default lambda_gamma grid: log-spaced so lambda_gamma * max w_gamma spans
/// [median |r|, max |r|] of the preliminary residuals (the range where the
/// gamma support changes). Returns {0} when there is no gamma support.
std::vector<double> default_lambda_gamma_grid(const Dataset& data, const PreliminaryFit& prelim,
                                              const Weights& weights, int count);

struct PipelineConfig {
  int grid_size = 20;
  double r_w = 100.0;
  bool threshold_prelim = false;                    // (pre) vs thresholded (thpre)
  std::vector<double> tau_grid = {0.5, 1.0, 2.0, 4.0};
  double prelim_min_ratio = 1e-2;
  SolverOptions prelim_solver;
  RobustOptions robust;
};

struct PipelineResult {
  FitResult fit;
  PreliminaryFit prelim;
  std::vector<double> grid_lambda_beta;   // recorded for auditability
  std::vector<double> grid_lambda_gamma;
  std::vector<double> grid_lambda_theta;
};

/// select_preliminary -> compute_weights -> select_fit. Errors carry a stage
/// tag ("preliminary:" / "robust:").
PipelineResult full_pipeline(const Dataset& data, const ThresholdingRule& rule,
                             const PipelineConfig& config = {});

}  // namespace srlr
