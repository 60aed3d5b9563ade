#pragma once

#include "srlr/dataset.hpp"
#include "srlr/lasso.hpp"
#include "srlr/preliminary.hpp"
#include "srlr/thresholding.hpp"

namespace srlr {

/// Adaptive weights from the preliminary fit:
///   w_beta_j  = max(1/|beta~_j|, 1/R_w)  on S~,
///   w_gamma_i = min(1/|gamma~_i|, R_w)   on G~.
/// Coordinates outside the supports carry no weight (structurally zero).
/// Throws on empty S~ (nothing to estimate).
Weights compute_weights(const PreliminaryFit& prelim, double r_w);

/// Closed-form outlier update: gamma_i = Theta(r_i; lambda_gamma w_gamma_i)/sqrt(n)
/// on G~, zero elsewhere. `residuals` are y - X beta.
Eigen::VectorXd gamma_step(const Eigen::VectorXd& residuals, const ThresholdingRule& rule,
                           double lambda_gamma, const Weights& weights);

struct RobustOptions {
  double stop_tol = 1e-3;   // on ||beta^k - beta^{k-1}||_1 / |S~|
  int max_outer = 100;
  SolverOptions inner;      // beta-step coordinate descent
  bool record_trace = true;
};

/// Alternating minimization over (beta, gamma): the beta-step is a weighted
/// lasso on the S~ columns against the working response y - sqrt(n) gamma,
/// the gamma-step is the closed-form thresholding update. beta_init defaults
/// to the preliminary beta~.
FitResult fit(const Dataset& data, const PreliminaryFit& prelim, const ThresholdingRule& rule,
              const TuningParams& tuning, double r_w,
              const Eigen::VectorXd* beta_init = nullptr, const RobustOptions& opts = {});

/// Max violation of the robust estimating equations
///   (1/n) sum_i x_ij psi(r_i; lambda_gamma w_gamma_i) + lambda_beta w_beta_j d|beta_j|
/// over j in S~, where residuals outside G~ enter raw (psi with no
/// thresholding). Near zero at a converged fixed point of the alternation.
double estimating_equation_residual(const Dataset& data, const FitResult& fit,
                                    const ThresholdingRule& rule, const TuningParams& tuning,
                                    const Weights& weights);

}  // namespace srlr
