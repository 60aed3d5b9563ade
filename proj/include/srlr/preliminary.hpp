#pragma once

#include <string>
#include <vector>

#include "srlr/dataset.hpp"
#include "srlr/lasso.hpp"

namespace srlr {

/// Lasso-type preliminary estimate on the extended design Z = (X, sqrt(n) I):
/// theta~ = (beta~, gamma~) with supports S~/G~, plus its thresholded variant.
struct PreliminaryFit {
  Eigen::VectorXd beta_tilde;   // length p
  Eigen::VectorXd gamma_tilde;  // length n
  std::vector<Index> S_tilde;
  std::vector<Index> G_tilde;
  double lambda_theta = 0.0;
  double tau_theta = 0.0;
  bool thresholded = false;
  bool converged = true;
  std::string note;  // selection metadata / degeneracy warnings

  bool empty_support() const { return S_tilde.empty() && G_tilde.empty(); }
};

/// Unit-weight lasso on Z at the given lambda_theta. The identity block is
/// handled analytically (gamma_i <- S(r_i/sqrt(n) + gamma_i, lambda_theta));
/// the result matches generic coordinate descent on a materialized Z.
PreliminaryFit fit_preliminary(const Dataset& data, double lambda_theta,
                               const SolverOptions& opts = {},
                               const PreliminaryFit* warm_start = nullptr);

/// Zeroes coordinates with |theta_j| <= tau_theta * lambda_theta and
/// recomputes supports. Throws if `fit` is already thresholded.
PreliminaryFit threshold_preliminary(const PreliminaryFit& fit, double tau_theta);

/// BIC for the extended model: (1/2n)||y - Z theta||^2 + (log n / n)|supp(theta)|.
double preliminary_bic(const Dataset& data, const PreliminaryFit& fit);

/// Warm-started path over lambda_theta (and tau_theta when use_threshold);
/// returns the BIC minimizer, ties toward larger lambda_theta / tau_theta.
/// If every grid point has empty support, returns the least-penalized fit
/// with a warning note.
PreliminaryFit select_preliminary(const Dataset& data,
                                  const std::vector<double>& grid_lambda_theta,
                                  const std::vector<double>& grid_tau_theta, bool use_threshold,
                                  const SolverOptions& opts = {});

/// Unit-weight lambda grid for the extended design:
/// lambda_max = max(max_j |<x_j, y>|/n, max_i |y_i|/sqrt(n)).
std::vector<double> preliminary_lambda_grid(const Dataset& data, int count,
                                            double min_ratio = 1e-2);

}  // namespace srlr
