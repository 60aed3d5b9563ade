#pragma once

#include <Eigen/Dense>

namespace srlr {

/// Brute-force restricted-eigenvalue quantities on small instances. These
/// exist as oracles and teaching aids, not for production fits, hence the
/// combinatorial guards p <= 12 and n <= 14.
struct EigenReport {
  double delta_min = 0.0;
  double delta_max = 0.0;
  double rho = 0.0;        // 2 * delta_max / kappa
  double bound_35 = 0.0;   // max_ij x_ij^2 * u * u' / n
  long supports_examined = 0;
  bool rho_flagged = false;  // rho >= 1: geometric decay not guaranteed
};

/// min over all column supports |T| = u of the smallest eigenvalue of
/// X_T' X_T / n (cyclic Jacobi on each Gram block). Requires u <= p <= 12.
double restricted_min_eigenvalue(const Eigen::MatrixXd& X, int u);

/// max over column supports |T| = u and row subsets |G| = u' of the largest
/// eigenvalue of (X_(G),T)' X_(G),T / n. Requires u <= p <= 12, u' <= n <= 14.
double restricted_max_eigenvalue(const Eigen::MatrixXd& X, int u, int u_prime);

/// Contraction factor rho = 2 * delta_max(s~, g~) / kappa.
double contraction_factor(const Eigen::MatrixXd& X, int s_tilde, int g_tilde, double kappa);

/// Bundles delta_min(u), delta_max(u, u'), rho, and the elementwise bound.
EigenReport eigen_report(const Eigen::MatrixXd& X, int u, int u_prime, double kappa);

}  // namespace srlr
