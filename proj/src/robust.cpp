#include "srlr/robust.hpp"

#include <cmath>
#include <stdexcept>

namespace srlr {

Weights compute_weights(const PreliminaryFit& prelim, double r_w) {
  if (!(r_w > 0.0)) throw std::invalid_argument("compute_weights: R_w must be > 0");
  if (prelim.S_tilde.empty())
    throw std::invalid_argument("compute_weights: degenerate fit, empty preliminary "
                                "coefficient support (nothing to estimate)");
  Weights w;
  w.r_w = r_w;
  w.support_beta = prelim.S_tilde;
  w.support_gamma = prelim.G_tilde;
  w.w_beta.resize(static_cast<Index>(w.support_beta.size()));
  w.w_gamma.resize(static_cast<Index>(w.support_gamma.size()));
  for (std::size_t k = 0; k < w.support_beta.size(); ++k)
    w.w_beta[static_cast<Index>(k)] =
        std::max(1.0 / std::abs(prelim.beta_tilde[w.support_beta[k]]), 1.0 / r_w);
  for (std::size_t k = 0; k < w.support_gamma.size(); ++k)
    w.w_gamma[static_cast<Index>(k)] =
        std::min(1.0 / std::abs(prelim.gamma_tilde[w.support_gamma[k]]), r_w);
  return w;
}

Eigen::VectorXd gamma_step(const Eigen::VectorXd& residuals, const ThresholdingRule& rule,
                           double lambda_gamma, const Weights& weights) {
  const double sqrt_n = std::sqrt(static_cast<double>(residuals.size()));
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(residuals.size());
  for (std::size_t k = 0; k < weights.support_gamma.size(); ++k) {
    const Index i = weights.support_gamma[k];
    gamma[i] = theta(rule, residuals[i], lambda_gamma * weights.w_gamma[static_cast<Index>(k)]) /
               sqrt_n;
  }
  return gamma;
}

FitResult fit(const Dataset& data, const PreliminaryFit& prelim, const ThresholdingRule& rule,
              const TuningParams& tuning, double r_w, const Eigen::VectorXd* beta_init,
              const RobustOptions& opts) {
  const Index n = data.n(), p = data.p();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Weights weights = compute_weights(prelim, r_w);
  const auto& support = weights.support_beta;
  const Index s = static_cast<Index>(support.size());

  Eigen::MatrixXd Xs(n, s);
  for (Index k = 0; k < s; ++k) Xs.col(k) = data.X.col(support[static_cast<std::size_t>(k)]);

  Eigen::VectorXd b(s);
  {
    const Eigen::VectorXd& init = beta_init ? *beta_init : prelim.beta_tilde;
    if (init.size() != p) throw std::invalid_argument("fit: beta_init must have length p");
    for (Index k = 0; k < s; ++k) b[k] = init[support[static_cast<std::size_t>(k)]];
  }

  auto scatter = [&](const Eigen::VectorXd& bs) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
    for (Index k = 0; k < s; ++k) full[support[static_cast<std::size_t>(k)]] = bs[k];
    return full;
  };

  FitResult result;
  result.tuning = tuning;
  result.rule_name = rule.name();
  result.converged = false;

  // Step 1: gamma^0 from the initial coefficients.
  Eigen::VectorXd beta_full = scatter(b);
  Eigen::VectorXd gamma = gamma_step(data.y - Xs * b, rule, tuning.lambda_gamma, weights);
  if (opts.record_trace)
    result.objective_trace.push_back(objective(data, beta_full, gamma, rule, weights, tuning));

  const double s_tilde = static_cast<double>(prelim.S_tilde.size());
  for (int k = 1; k <= opts.max_outer; ++k) {
    result.iterations = k;
    // Step 2a: weighted lasso against the working response y - sqrt(n) gamma.
    const Eigen::VectorXd working = data.y - sqrt_n * gamma;
    LassoSolution sol =
        solve_weighted_lasso(Xs, working, tuning.lambda_beta, weights.w_beta, &b, opts.inner);
    const double change = (sol.coef - b).lpNorm<1>();
    b = std::move(sol.coef);
    beta_full = scatter(b);
    if (opts.record_trace)
      result.objective_trace.push_back(objective(data, beta_full, gamma, rule, weights, tuning));

    // Step 2b: closed-form gamma update.
    gamma = gamma_step(data.y - Xs * b, rule, tuning.lambda_gamma, weights);
    if (opts.record_trace)
      result.objective_trace.push_back(objective(data, beta_full, gamma, rule, weights, tuning));

    if (change / s_tilde <= opts.stop_tol) {
      result.converged = true;
      break;
    }
  }

  result.beta = std::move(beta_full);
  result.gamma = std::move(gamma);
  result.support_beta = support_of(result.beta);
  result.support_gamma = support_of(result.gamma);
  return result;
}

double estimating_equation_residual(const Dataset& data, const FitResult& fit,
                                    const ThresholdingRule& rule, const TuningParams& tuning,
                                    const Weights& weights) {
  const Index n = data.n();
  const double dn = static_cast<double>(n);

  // psi of the residuals: thresholded on G~, raw outside.
  Eigen::VectorXd r = data.y - data.X * fit.beta;
  Eigen::VectorXd psi_r = r;
  for (std::size_t k = 0; k < weights.support_gamma.size(); ++k) {
    const Index i = weights.support_gamma[k];
    psi_r[i] = psi(rule, r[i], tuning.lambda_gamma * weights.w_gamma[static_cast<Index>(k)]);
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < weights.support_beta.size(); ++k) {
    const Index j = weights.support_beta[k];
    const double g = data.X.col(j).dot(psi_r) / dn;
    const double lw = tuning.lambda_beta * weights.w_beta[static_cast<Index>(k)];
    const double bj = fit.beta[j];
    const double v =
        bj != 0.0 ? std::abs(g - lw * (bj > 0 ? 1.0 : -1.0)) : std::max(0.0, std::abs(g) - lw);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace srlr
