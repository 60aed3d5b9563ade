#include "srlr/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace srlr {

double bic_score(const Dataset& data, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma) {
  const double dn = static_cast<double>(data.n());
  const double sqrt_n = std::sqrt(dn);
  const double rss = (data.y - data.X * beta - sqrt_n * gamma).squaredNorm();
  const double support = static_cast<double>(support_of(beta).size() + support_of(gamma).size());
  return rss / (2.0 * dn) + std::log(dn) / dn * support;
}

FitResult select_fit(const Dataset& data, const PreliminaryFit& prelim,
                     const ThresholdingRule& rule, const std::vector<double>& grid_beta,
                     const std::vector<double>& grid_gamma, double r_w,
                     const RobustOptions& opts) {
  if (grid_beta.empty() || grid_gamma.empty())
    throw std::invalid_argument("select_fit: empty tuning grid");

  std::vector<double> lb = grid_beta, lg = grid_gamma;
  std::sort(lb.begin(), lb.end(), std::greater<>());
  std::sort(lg.begin(), lg.end(), std::greater<>());

  FitResult best;
  double best_bic = std::numeric_limits<double>::infinity();
  double best_lb = -1.0, best_lg = -1.0;
  bool have_any_converged = false;
  std::string diagnostics;

  for (double lambda_gamma : lg) {
    Eigen::VectorXd warm = prelim.beta_tilde;
    for (double lambda_beta : lb) {
      TuningParams tuning;
      tuning.lambda_beta = lambda_beta;
      tuning.lambda_gamma = lambda_gamma;
      tuning.lambda_theta = prelim.lambda_theta;
      tuning.tau_theta = prelim.tau_theta;
      FitResult candidate = fit(data, prelim, rule, tuning, r_w, &warm, opts);
      warm = candidate.beta;
      if (!candidate.converged) {
        diagnostics += "  lambda_beta=" + std::to_string(lambda_beta) +
                       " lambda_gamma=" + std::to_string(lambda_gamma) + ": no convergence in " +
                       std::to_string(candidate.iterations) + " iterations\n";
      } else {
        have_any_converged = true;
      }
      const double bic = bic_score(data, candidate.beta, candidate.gamma);
      const bool better =
          bic < best_bic ||
          (bic == best_bic && (lambda_beta > best_lb ||
                               (lambda_beta == best_lb && lambda_gamma > best_lg)));
      if (better) {
        best = std::move(candidate);
        best.bic = bic;
        best_bic = bic;
        best_lb = lambda_beta;
        best_lg = lambda_gamma;
      }
    }
  }
  if (!have_any_converged)
    throw std::runtime_error("select_fit: no grid point converged\n" + diagnostics);
  return best;
}

std::vector<double> default_lambda_beta_grid(const Dataset& data, const PreliminaryFit& prelim,
                                             const Weights& weights, int count) {
  const Index n = data.n();
  const Index s = static_cast<Index>(weights.support_beta.size());
  Eigen::MatrixXd Xs(n, s);
  for (Index k = 0; k < s; ++k) Xs.col(k) = data.X.col(weights.support_beta[static_cast<std::size_t>(k)]);
  const Eigen::VectorXd working =
      data.y - std::sqrt(static_cast<double>(n)) * prelim.gamma_tilde;
  return lambda_grid(Xs, working, weights.w_beta, count);
}

std::vector<double> default_lambda_gamma_grid(const Dataset& data, const PreliminaryFit& prelim,
                                              const Weights& weights, int count) {
  if (weights.support_gamma.empty() || count < 2) return {0.0};
  Eigen::VectorXd r = (data.y - data.X * prelim.beta_tilde -
                       std::sqrt(static_cast<double>(data.n())) * prelim.gamma_tilde)
                          .cwiseAbs();
  std::vector<double> abs_r(r.data(), r.data() + r.size());
  std::nth_element(abs_r.begin(), abs_r.begin() + abs_r.size() / 2, abs_r.end());
  const double med = abs_r[abs_r.size() / 2];
  const double mx = r.maxCoeff();
  const double w_max = weights.w_gamma.maxCoeff();
  double hi = mx / w_max, lo = med / w_max;
  if (!(hi > 0.0)) return {0.0};
  if (!(lo > 0.0) || lo >= hi) lo = hi * 1e-2;
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double log_hi = std::log(hi), log_lo = std::log(lo);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] = std::exp(
        log_hi + (log_lo - log_hi) * static_cast<double>(k) / static_cast<double>(count - 1));
  return grid;
}

PipelineResult full_pipeline(const Dataset& data, const ThresholdingRule& rule,
                             const PipelineConfig& config) {
  PipelineResult out;
  try {
    out.grid_lambda_theta =
        preliminary_lambda_grid(data, config.grid_size, config.prelim_min_ratio);
    out.prelim = select_preliminary(data, out.grid_lambda_theta, config.tau_grid,
                                    config.threshold_prelim, config.prelim_solver);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("preliminary: ") + e.what());
  }
  if (out.prelim.S_tilde.empty())
    throw std::runtime_error("preliminary: empty coefficient support (degenerate fit); " +
                             (out.prelim.note.empty() ? std::string("nothing to estimate")
                                                      : out.prelim.note));
  try {
    const Weights weights = compute_weights(out.prelim, config.r_w);
    out.grid_lambda_beta =
        default_lambda_beta_grid(data, out.prelim, weights, config.grid_size);
    out.grid_lambda_gamma =
        default_lambda_gamma_grid(data, out.prelim, weights, config.grid_size);
    out.fit = select_fit(data, out.prelim, rule, out.grid_lambda_beta, out.grid_lambda_gamma,
                         config.r_w, config.robust);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("robust: ") + e.what());
  }
  return out;
}

}  // namespace srlr
