#include "srlr/preliminary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace srlr {

namespace {

double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

PreliminaryFit fit_preliminary(const Dataset& data, double lambda_theta,
                               const SolverOptions& opts, const PreliminaryFit* warm_start) {
  if (!(lambda_theta > 0.0)) throw std::invalid_argument("fit_preliminary: lambda_theta must be > 0");
  if (opts.tol <= 0 || opts.max_iter < 1)
    throw std::invalid_argument("fit_preliminary: bad solver options");
  const Index n = data.n(), p = data.p();
  const double dn = static_cast<double>(n);
  const double sqrt_n = std::sqrt(dn);

  Eigen::VectorXd beta = warm_start ? warm_start->beta_tilde : Eigen::VectorXd::Zero(p);
  Eigen::VectorXd gamma = warm_start ? warm_start->gamma_tilde : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = data.y - data.X * beta - sqrt_n * gamma;

  // Sweep order matches a materialized Z = (X, sqrt(n) I): beta block first.
  // Every column of Z has squared norm n, so both updates share one form.
  auto update_beta = [&](Index j) {
    const double old = beta[j];
    const double rho = data.X.col(j).dot(r) / dn + old;
    const double bj = soft(rho, lambda_theta);
    if (bj != old) {
      r -= data.X.col(j) * (bj - old);
      beta[j] = bj;
    }
    return std::abs(bj - old);
  };
  auto update_gamma = [&](Index i) {
    const double old = gamma[i];
    const double gi = soft(r[i] / sqrt_n + old, lambda_theta);
    if (gi != old) {
      r[i] -= sqrt_n * (gi - old);
      gamma[i] = gi;
    }
    return std::abs(gi - old);
  };

  PreliminaryFit fit;
  int sweeps = 0;
  bool converged = false;
  std::vector<Index> active_b, active_g;
  while (sweeps < opts.max_iter) {
    ++sweeps;
    double change = 0.0;
    for (Index j = 0; j < p; ++j) change = std::max(change, update_beta(j));
    for (Index i = 0; i < n; ++i) change = std::max(change, update_gamma(i));
    if (change <= opts.tol) {
      converged = true;
      break;
    }
    if (!opts.active_set) continue;
    active_b.clear();
    active_g.clear();
    for (Index j = 0; j < p; ++j)
      if (beta[j] != 0.0) active_b.push_back(j);
    for (Index i = 0; i < n; ++i)
      if (gamma[i] != 0.0) active_g.push_back(i);
    while (sweeps < opts.max_iter) {
      ++sweeps;
      double inner = 0.0;
      for (Index j : active_b) inner = std::max(inner, update_beta(j));
      for (Index i : active_g) inner = std::max(inner, update_gamma(i));
      if (inner <= opts.tol) break;
    }
  }

  fit.beta_tilde = std::move(beta);
  fit.gamma_tilde = std::move(gamma);
  fit.S_tilde = support_of(fit.beta_tilde);
  fit.G_tilde = support_of(fit.gamma_tilde);
  fit.lambda_theta = lambda_theta;
  fit.converged = converged;
  return fit;
}

PreliminaryFit threshold_preliminary(const PreliminaryFit& fit, double tau_theta) {
  if (fit.thresholded)
    throw std::invalid_argument("threshold_preliminary: fit is already thresholded");
  if (tau_theta < 0) throw std::invalid_argument("threshold_preliminary: tau_theta must be >= 0");
  PreliminaryFit out = fit;
  const double cut = tau_theta * fit.lambda_theta;
  for (Index j = 0; j < out.beta_tilde.size(); ++j)
    if (std::abs(out.beta_tilde[j]) <= cut) out.beta_tilde[j] = 0.0;
  for (Index i = 0; i < out.gamma_tilde.size(); ++i)
    if (std::abs(out.gamma_tilde[i]) <= cut) out.gamma_tilde[i] = 0.0;
  out.S_tilde = support_of(out.beta_tilde);
  out.G_tilde = support_of(out.gamma_tilde);
  out.tau_theta = tau_theta;
  out.thresholded = true;
  if (out.empty_support()) out.note = "degenerate: thresholding emptied both supports";
  return out;
}

double preliminary_bic(const Dataset& data, const PreliminaryFit& fit) {
  const double dn = static_cast<double>(data.n());
  const double sqrt_n = std::sqrt(dn);
  const double rss =
      (data.y - data.X * fit.beta_tilde - sqrt_n * fit.gamma_tilde).squaredNorm();
  const double support =
      static_cast<double>(fit.S_tilde.size() + fit.G_tilde.size());
  return rss / (2.0 * dn) + std::log(dn) / dn * support;
}

PreliminaryFit select_preliminary(const Dataset& data,
                                  const std::vector<double>& grid_lambda_theta,
                                  const std::vector<double>& grid_tau_theta, bool use_threshold,
                                  const SolverOptions& opts) {
  if (grid_lambda_theta.empty())
    throw std::invalid_argument("select_preliminary: empty lambda_theta grid");
  if (use_threshold && grid_tau_theta.empty())
    throw std::invalid_argument("select_preliminary: empty tau_theta grid");

  // Visit lambdas descending so warm starts stay on the sparse side and ties
  // resolve toward the sparser fit.
  std::vector<double> lambdas;
  for (double v : grid_lambda_theta)
    if (v > 0.0) lambdas.push_back(v);
  if (lambdas.empty()) {
    // happens only for the all-zero response, where theta~ = 0 is exact
    PreliminaryFit zero;
    zero.beta_tilde = Eigen::VectorXd::Zero(data.p());
    zero.gamma_tilde = Eigen::VectorXd::Zero(data.n());
    zero.note = "warning: degenerate grid (all-zero response); theta~ = 0";
    return zero;
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  std::vector<double> taus = grid_tau_theta;
  std::sort(taus.begin(), taus.end(), std::greater<>());

  PreliminaryFit best, least_penalized;
  double best_bic = std::numeric_limits<double>::infinity();
  bool have_best = false;
  PreliminaryFit path;
  bool have_path = false;

  for (double lambda : lambdas) {
    path = fit_preliminary(data, lambda, opts, have_path ? &path : nullptr);
    have_path = true;
    auto consider = [&](const PreliminaryFit& candidate) {
      least_penalized = candidate;
      if (candidate.empty_support()) return;
      const double bic = preliminary_bic(data, candidate);
      if (!have_best || bic < best_bic) {
        best = candidate;
        best_bic = bic;
        have_best = true;
      }
    };
    if (use_threshold) {
      for (double tau : taus) consider(threshold_preliminary(path, tau));
    } else {
      consider(path);
    }
  }

  if (!have_best) {
    least_penalized.note = "warning: empty support at every grid point; returning the "
                           "least-penalized fit";
    return least_penalized;
  }
  best.note = "selected by BIC over " + std::to_string(lambdas.size()) + " lambda_theta values" +
              (use_threshold ? " x " + std::to_string(taus.size()) + " tau_theta values" : "");
  return best;
}

std::vector<double> preliminary_lambda_grid(const Dataset& data, int count, double min_ratio) {
  if (count < 2) throw std::invalid_argument("preliminary_lambda_grid: count must be >= 2");
  const double dn = static_cast<double>(data.n());
  const double sqrt_n = std::sqrt(dn);
  double lambda_max = data.y.cwiseAbs().maxCoeff() / sqrt_n;
  for (Index j = 0; j < data.p(); ++j)
    lambda_max = std::max(lambda_max, std::abs(data.X.col(j).dot(data.y)) / dn);
  if (lambda_max == 0.0) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(min_ratio * lambda_max);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] = std::exp(
        log_max + (log_min - log_max) * static_cast<double>(k) / static_cast<double>(count - 1));
  return grid;
}

}  // namespace srlr
