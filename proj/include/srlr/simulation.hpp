#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srlr/dataset.hpp"
#include "srlr/preliminary.hpp"
#include "srlr/selection.hpp"

namespace srlr {

/// One synthetic design: AR(1)-correlated Gaussian covariates, +/-1 signal
/// coefficients on a uniform support, constant-magnitude response outliers.
struct Scenario {
  int n = 200;
  int p = 200;
  int s_star = 10;
  int g_star = 10;                 // outlier count
  double outlier_magnitude = 8.0;  // the sqrt(n) * gamma* value added to y
  double rho_cov = 0.3;            // Sigma_ij = rho^|i-j|
  double sigma = 1.0;              // noise scale
  std::uint64_t seed = 0;

  double outlier_pct() const { return 100.0 * g_star / n; }
};

struct GroundTruth {
  Eigen::VectorXd beta_star;   // length p
  Eigen::VectorXd gamma_star;  // length n
  std::vector<Index> S_star;
  std::vector<Index> G_star;
};

struct Metrics {
  double sq_l2_error = 0.0;
  int fp = 0;
  int tp = 0;
  int support_size_prelim = 0;  // |S~| + |G~| when a preliminary fit is given
  bool coverage = false;        // S* in S~ and G* in G~
};

/// Draws (Dataset, GroundTruth) deterministically from scenario.seed.
/// Covariate rows follow the exact AR(1) recursion for Sigma_ij = rho^|i-j|,
/// then columns are renormalized to sqrt(n); y = X beta* + sqrt(n) gamma* + eps
/// is assembled from the normalized X, so the dataset's units are the truth's
/// units (column_scales is all ones).
std::pair<Dataset, GroundTruth> generate(const Scenario& scenario);

/// Squared l2 error, FP/TP of the coefficient support, and screening coverage
/// of the preliminary supports (when supplied).
Metrics evaluate(const Eigen::VectorXd& fit_beta, const PreliminaryFit* prelim,
                 const GroundTruth& truth);

/// Standard Lasso ignoring the outlier structure; lambda by BIC with gamma=0.
Eigen::VectorXd lasso_baseline(const Dataset& data, int grid_size = 20);

/// Lasso with the true outlier rows removed in advance (columns renormalized);
/// coefficients are mapped back to the full-data column units.
Eigen::VectorXd oracle_baseline(const Dataset& data, const GroundTruth& truth,
                                int grid_size = 20);

struct SummaryRow {
  std::string prelim;  // "pre", "thpre", or "none" for baselines
  double outlier_pct = 0.0;
  std::string rule;    // rule name, "lasso", or "oracle"
  double sq_l2_error = 0.0;
  double fp = 0.0;
  double tp = 0.0;
  double support_size = 0.0;
  double coverage = 0.0;
};

struct MonteCarloSummary {
  std::vector<SummaryRow> rows;
  int replications = 0;
  int failures = 0;  // replications excluded from the means
  Scenario scenario;
};

struct MonteCarloConfig {
  PipelineConfig pipeline;
  int jobs = 1;                   // replication-level parallelism
  bool include_baselines = true;
};

/// Mean metrics over seeded replications for each (prelim variant x rule),
/// plus Lasso/Oracle baseline rows. Replication r uses seed
/// mix_seed(scenario.seed, r), so results do not depend on `jobs`.
MonteCarloSummary run_monte_carlo(const Scenario& scenario, int replications,
                                  const std::vector<ThresholdingRule>& rules,
                                  const std::vector<std::string>& prelim_variants,
                                  const MonteCarloConfig& config = {});

/// Summary rows as CSV with the fixed column set
/// prelim,outlier_pct,rule,sq_l2_error,fp,tp,support_size,coverage.
std::string summary_csv_header();
std::string summary_to_csv(const std::vector<SummaryRow>& rows, bool with_header = true);

/// Runs fn(rep) for rep in [0, replications) on `jobs` threads. Exceptions
/// propagate after all workers finish.
void parallel_reps(int replications, int jobs, const std::function<void(int)>& fn);

}  // namespace srlr
