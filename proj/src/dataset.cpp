#include "srlr/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace srlr {

namespace {

void check_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (!X.allFinite()) throw std::invalid_argument("covariate matrix contains NaN/Inf");
  if (!y.allFinite()) throw std::invalid_argument("response vector contains NaN/Inf");
}

void check_shape(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("need n >= 1 and p >= 1");
  if (y.size() != X.rows())
    throw std::invalid_argument("response length " + std::to_string(y.size()) +
                                " does not match row count " + std::to_string(X.rows()));
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> normalize_columns(const Eigen::MatrixXd& X_raw) {
  const double sqrt_n = std::sqrt(static_cast<double>(X_raw.rows()));
  Eigen::MatrixXd X = X_raw;
  Eigen::VectorXd scales(X_raw.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double norm = X.col(j).norm();
    if (norm == 0.0)
      throw std::invalid_argument("zero column: column " + std::to_string(j) +
                                  " of the covariate matrix has zero norm");
    scales[j] = sqrt_n / norm;
    X.col(j) *= scales[j];
  }
  return {std::move(X), std::move(scales)};
}

Dataset Dataset::from_raw(Eigen::MatrixXd X_raw, Eigen::VectorXd y) {
  check_shape(X_raw, y);
  check_finite(X_raw, y);
  auto [X, scales] = normalize_columns(X_raw);
  return Dataset{std::move(y), std::move(X), std::move(scales)};
}

Dataset Dataset::from_normalized(Eigen::MatrixXd X, Eigen::VectorXd y) {
  check_shape(X, y);
  check_finite(X, y);
  const double sqrt_n = std::sqrt(static_cast<double>(X.rows()));
  for (Index j = 0; j < X.cols(); ++j) {
    if (std::abs(X.col(j).norm() - sqrt_n) > 1e-8 * sqrt_n)
      throw std::invalid_argument("column " + std::to_string(j) +
                                  " violates the sqrt(n) norm convention");
  }
  Eigen::VectorXd unit_scales = Eigen::VectorXd::Ones(X.cols());
  return Dataset{std::move(y), std::move(X), std::move(unit_scales)};
}

std::vector<Index> support_of(const Eigen::VectorXd& v) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

double objective(const Dataset& data, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                 const ThresholdingRule& rule, const Weights& weights,
                 const TuningParams& tuning) {
  const Index n = data.n(), p = data.p();
  if (beta.size() != p || gamma.size() != n)
    throw std::invalid_argument("objective: coefficient dimensions do not match the dataset");
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  double value =
      (data.y - data.X * beta - sqrt_n * gamma).squaredNorm() / (2.0 * static_cast<double>(n));

  std::vector<char> in_s(static_cast<std::size_t>(p), 0), in_g(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < weights.support_beta.size(); ++k) {
    in_s[static_cast<std::size_t>(weights.support_beta[k])] = 1;
    value += tuning.lambda_beta * weights.w_beta[static_cast<Index>(k)] *
             std::abs(beta[weights.support_beta[k]]);
  }
  for (std::size_t k = 0; k < weights.support_gamma.size(); ++k) {
    in_g[static_cast<std::size_t>(weights.support_gamma[k])] = 1;
    value += penalty(rule, sqrt_n * gamma[weights.support_gamma[k]],
                     tuning.lambda_gamma * weights.w_gamma[static_cast<Index>(k)]) /
             static_cast<double>(n);
  }
  for (Index j = 0; j < p; ++j)
    if (beta[j] != 0.0 && !in_s[static_cast<std::size_t>(j)])
      throw std::invalid_argument("objective: beta is nonzero at index " + std::to_string(j) +
                                  ", outside the weight support");
  for (Index i = 0; i < n; ++i)
    if (gamma[i] != 0.0 && !in_g[static_cast<std::size_t>(i)])
      throw std::invalid_argument("objective: gamma is nonzero at index " + std::to_string(i) +
                                  ", outside the weight support");
  return value;
}

}  // namespace srlr
