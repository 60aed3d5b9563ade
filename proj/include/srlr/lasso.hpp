#pragma once

#include <Eigen/Dense>
#include <vector>

namespace srlr {

struct SolverOptions {
  double tol = 1e-7;      // convergence on the max coordinate change per sweep
  int max_iter = 10000;   // full-sweep budget
  bool active_set = true;
};

struct LassoSolution {
  Eigen::VectorXd coef;
  int sweeps = 0;
  bool converged = true;
};

/// Coordinate-descent minimizer of
///   (1/2n) ||y - X b||^2 + lambda * sum_j w_j |b_j|
/// with deterministic ascending sweep order. Columns of X must be nonzero;
/// structural zeros are the caller's business (drop the columns).
LassoSolution solve_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   double lambda, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd* warm_start = nullptr,
                                   const SolverOptions& opts = {});

/// Optimality certificate: max KKT violation of the weighted-lasso problem at
/// b. Zero (to roundoff) iff b is a minimizer.
double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& b,
                    double lambda, const Eigen::VectorXd& w);

/// Log-spaced grid of `count` lambdas descending from
/// lambda_max = max_j |<x_j, y>| / (n w_j) to min_ratio * lambda_max.
/// All-zero y degenerates to the single-point grid {0}.
std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, int count, double min_ratio);

/// min_ratio convention: 1e-3 when n > m, 1e-2 otherwise.
double default_min_ratio(Eigen::Index n, Eigen::Index m);

std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, int count);

}  // namespace srlr
