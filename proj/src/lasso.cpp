#include "srlr/lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace srlr {

namespace {

double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

LassoSolution solve_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   double lambda, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd* warm_start, const SolverOptions& opts) {
  const Eigen::Index n = X.rows(), m = X.cols();
  if (y.size() != n) throw std::invalid_argument("solve_weighted_lasso: y/X size mismatch");
  if (w.size() != m) throw std::invalid_argument("solve_weighted_lasso: weight size mismatch");
  if (!X.allFinite() || !y.allFinite() || !w.allFinite() || !std::isfinite(lambda))
    throw std::invalid_argument("solve_weighted_lasso: NaN/Inf in inputs");
  if (lambda < 0) throw std::invalid_argument("solve_weighted_lasso: lambda must be >= 0");
  if (opts.tol <= 0 || opts.max_iter < 1)
    throw std::invalid_argument("solve_weighted_lasso: bad solver options");

  Eigen::VectorXd col_sq(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    col_sq[j] = X.col(j).squaredNorm();
    if (col_sq[j] == 0.0)
      throw std::invalid_argument("solve_weighted_lasso: column " + std::to_string(j) +
                                  " is zero");
  }

  Eigen::VectorXd b = warm_start ? *warm_start : Eigen::VectorXd::Zero(m);
  if (b.size() != m) throw std::invalid_argument("solve_weighted_lasso: warm start size mismatch");
  Eigen::VectorXd r = y - X * b;
  const double dn = static_cast<double>(n);

  // One coordinate minimization; returns |change|.
  auto update = [&](Eigen::Index j) {
    const double old = b[j];
    const double rho = X.col(j).dot(r) + col_sq[j] * old;
    const double bj = soft(rho, dn * lambda * w[j]) / col_sq[j];
    if (bj != old) {
      r -= X.col(j) * (bj - old);
      b[j] = bj;
    }
    return std::abs(bj - old);
  };

  LassoSolution out;
  std::vector<Eigen::Index> active;
  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    ++out.sweeps;
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) max_change = std::max(max_change, update(j));
    if (max_change <= opts.tol) {
      out.coef = std::move(b);
      return out;
    }
    if (!opts.active_set) continue;

    // Iterate on the current support until stable, then re-check all
    // coordinates with the full sweep above.
    active.clear();
    for (Eigen::Index j = 0; j < m; ++j)
      if (b[j] != 0.0) active.push_back(j);
    while (out.sweeps < opts.max_iter) {
      ++out.sweeps;
      double inner_change = 0.0;
      for (Eigen::Index j : active) inner_change = std::max(inner_change, update(j));
      if (inner_change <= opts.tol) break;
    }
  }
  out.converged = false;
  out.coef = std::move(b);
  return out;
}

double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& b,
                    double lambda, const Eigen::VectorXd& w) {
  const double dn = static_cast<double>(X.rows());
  const Eigen::VectorXd g = -(X.transpose() * (y - X * b)) / dn;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double lw = lambda * w[j];
    const double v = b[j] != 0.0 ? std::abs(g[j] + lw * (b[j] > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(g[j]) - lw);
    worst = std::max(worst, v);
  }
  return worst;
}

double default_min_ratio(Eigen::Index n, Eigen::Index m) { return n > m ? 1e-3 : 1e-2; }

std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, int count, double min_ratio) {
  if (count < 2) throw std::invalid_argument("lambda_grid: count must be >= 2");
  if (!(min_ratio > 0.0 && min_ratio < 1.0))
    throw std::invalid_argument("lambda_grid: min_ratio must be in (0, 1)");
  const double dn = static_cast<double>(X.rows());
  double lambda_max = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (w[j] <= 0.0) continue;  // an unpenalized coordinate never hits zero
    lambda_max = std::max(lambda_max, std::abs(X.col(j).dot(y)) / (dn * w[j]));
  }
  if (lambda_max == 0.0) return {0.0};

  std::vector<double> grid(static_cast<std::size_t>(count));
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(min_ratio * lambda_max);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_max + (log_min - log_max) * static_cast<double>(k) /
                               static_cast<double>(count - 1));
  return grid;
}

std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, int count) {
  return lambda_grid(X, y, w, count, default_min_ratio(X.rows(), X.cols()));
}

}  // namespace srlr
