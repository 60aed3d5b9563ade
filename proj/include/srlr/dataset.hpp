#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "srlr/thresholding.hpp"

namespace srlr {

using Index = Eigen::Index;

/// Regression data under the column-scale convention ||X.col(j)||_2 = sqrt(n).
/// The model has no intercept; center or augment the data beforehand.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  /// Multiplying a fitted coefficient by column_scales[j] restores the units
  /// of the matrix the dataset was built from.
  Eigen::VectorXd column_scales;

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }

  /// Normalizes X_raw's columns to sqrt(n) and records the scales.
  static Dataset from_raw(Eigen::MatrixXd X_raw, Eigen::VectorXd y);

  /// Accepts an already-normalized matrix (scales set to one); throws if the
  /// column-norm invariant does not hold.
  static Dataset from_normalized(Eigen::MatrixXd X, Eigen::VectorXd y);
};

/// Rescales each column of X_raw to have l2 norm sqrt(n); returns the scaled
/// matrix and the per-column factors sqrt(n)/||X_raw.col(j)||.
/// Throws std::invalid_argument for a zero-norm column (message names it).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> normalize_columns(const Eigen::MatrixXd& X_raw);

struct TuningParams {
  double lambda_beta = 0.0;
  double lambda_gamma = 0.0;
  double lambda_theta = 0.0;
  double tau_theta = 0.0;
};

/// Adaptive weights restricted to the preliminary supports. Coefficients
/// outside support_beta/support_gamma are structurally zero in the adaptive
/// stage (their weights would be infinite).
struct Weights {
  std::vector<Index> support_beta;   // S~, ascending
  Eigen::VectorXd w_beta;            // aligned with support_beta
  std::vector<Index> support_gamma;  // G~, ascending
  Eigen::VectorXd w_gamma;           // aligned with support_gamma
  double r_w = 100.0;
};

struct FitResult {
  Eigen::VectorXd beta;   // length p, in the dataset's normalized units
  Eigen::VectorXd gamma;  // length n
  std::vector<Index> support_beta;
  std::vector<Index> support_gamma;
  std::vector<double> objective_trace;  // L(b^0,g^0), L(b^1,g^0), L(b^1,g^1), ...
  int iterations = 0;
  bool converged = true;
  TuningParams tuning;
  std::string rule_name;
  double bic = std::numeric_limits<double>::quiet_NaN();
};

/// The alternating-minimization objective
///   (1/2n) ||y - X b - sqrt(n) g||^2
///   + lambda_beta * sum_{j in S~} w_beta_j |b_j|
///   + (1/n) * sum_{i in G~} P(sqrt(n) g_i; lambda_gamma * w_gamma_i),
/// with P the rule's penalty primitive, so that the closed-form gamma update
/// is the exact per-coordinate argmin. Throws if a coefficient is nonzero
/// outside the supports carried by `weights`.
double objective(const Dataset& data, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                 const ThresholdingRule& rule, const Weights& weights, const TuningParams& tuning);

/// Nonzero indices of v, ascending.
std::vector<Index> support_of(const Eigen::VectorXd& v);

}  // namespace srlr
