#include "srlr/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace srlr {

namespace {

constexpr int kMaxP = 12;
constexpr int kMaxN = 14;

// Eigenvalue range of a symmetric matrix by cyclic Jacobi rotations,
// converged when every off-diagonal entry is below 1e-12 * scale.
std::pair<double, double> jacobi_eigen_range(Eigen::MatrixXd A) {
  const Eigen::Index m = A.rows();
  if (m == 1) return {A(0, 0), A(0, 0)};
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 1; q < m; ++q)
      for (Eigen::Index pp = 0; pp < q; ++pp) off = std::max(off, std::abs(A(pp, q)));
    if (off <= 1e-12 * scale) break;
    for (Eigen::Index q = 1; q < m; ++q) {
      for (Eigen::Index pp = 0; pp < q; ++pp) {
        if (std::abs(A(pp, q)) <= 1e-15 * scale) continue;
        const double tau = (A(q, q) - A(pp, pp)) / (2.0 * A(pp, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < m; ++k) {
          const double akp = A(k, pp), akq = A(k, q);
          A(k, pp) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const double apk = A(pp, k), aqk = A(q, k);
          A(pp, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double lo = A(0, 0), hi = A(0, 0);
  for (Eigen::Index k = 1; k < m; ++k) {
    lo = std::min(lo, A(k, k));
    hi = std::max(hi, A(k, k));
  }
  return {lo, hi};
}

// Calls fn on every size-u subset of {0..m-1}, in lexicographic order.
template <typename Fn>
void for_each_subset(int m, int u, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(u));
  for (int i = 0; i < u; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    int k = u - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - u + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < u; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void check_guards(const Eigen::MatrixXd& X, int u, int u_prime, bool with_rows) {
  if (X.cols() > kMaxP)
    throw std::invalid_argument("restricted eigenvalue diagnostics are limited to p <= " +
                                std::to_string(kMaxP) +
                                " (subset enumeration); reduce the design or use them on a "
                                "pilot subsample");
  if (with_rows && X.rows() > kMaxN)
    throw std::invalid_argument("restricted eigenvalue diagnostics are limited to n <= " +
                                std::to_string(kMaxN) + " (row-subset enumeration)");
  if (u < 1 || u > X.cols()) throw std::invalid_argument("u must be in [1, p]");
  if (with_rows && (u_prime < 1 || u_prime > X.rows()))
    throw std::invalid_argument("u' must be in [1, n]");
}

}  // namespace

double restricted_min_eigenvalue(const Eigen::MatrixXd& X, int u) {
  check_guards(X, u, 1, false);
  const double dn = static_cast<double>(X.rows());
  double result = std::numeric_limits<double>::infinity();
  // The infimum over ||d||_0 <= u is attained on some |T| = u block.
  for_each_subset(static_cast<int>(X.cols()), u, [&](const std::vector<int>& T) {
    Eigen::MatrixXd sub(X.rows(), u);
    for (int k = 0; k < u; ++k) sub.col(k) = X.col(T[static_cast<std::size_t>(k)]);
    const Eigen::MatrixXd gram = sub.transpose() * sub / dn;
    result = std::min(result, jacobi_eigen_range(gram).first);
  });
  return result;
}

double restricted_max_eigenvalue(const Eigen::MatrixXd& X, int u, int u_prime) {
  check_guards(X, u, u_prime, true);
  const double dn = static_cast<double>(X.rows());
  double result = 0.0;
  // Attained at |T| = u, |G| = u': the Gram block grows under both inclusions.
  for_each_subset(static_cast<int>(X.cols()), u, [&](const std::vector<int>& T) {
    Eigen::MatrixXd sub(X.rows(), u);
    for (int k = 0; k < u; ++k) sub.col(k) = X.col(T[static_cast<std::size_t>(k)]);
    for_each_subset(static_cast<int>(X.rows()), u_prime, [&](const std::vector<int>& G) {
      Eigen::MatrixXd rows(u_prime, u);
      for (int k = 0; k < u_prime; ++k) rows.row(k) = sub.row(G[static_cast<std::size_t>(k)]);
      const Eigen::MatrixXd gram = rows.transpose() * rows / dn;
      result = std::max(result, jacobi_eigen_range(gram).second);
    });
  });
  return result;
}

double contraction_factor(const Eigen::MatrixXd& X, int s_tilde, int g_tilde, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("contraction_factor: kappa must be > 0");
  return 2.0 * restricted_max_eigenvalue(X, s_tilde, g_tilde) / kappa;
}

EigenReport eigen_report(const Eigen::MatrixXd& X, int u, int u_prime, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("eigen_report: kappa must be > 0");
  EigenReport report;
  report.delta_min = restricted_min_eigenvalue(X, u);
  report.delta_max = restricted_max_eigenvalue(X, u, u_prime);
  report.rho = 2.0 * report.delta_max / kappa;
  report.rho_flagged = report.rho >= 1.0;
  report.bound_35 = X.cwiseAbs2().maxCoeff() * static_cast<double>(u) *
                    static_cast<double>(u_prime) / static_cast<double>(X.rows());

  long count_T = 1, count_G = 1;
  for (int k = 0; k < u; ++k)
    count_T = count_T * (static_cast<long>(X.cols()) - k) / (k + 1);
  for (int k = 0; k < u_prime; ++k)
    count_G = count_G * (static_cast<long>(X.rows()) - k) / (k + 1);
  report.supports_examined = count_T * (1 + count_G);
  return report;
}

}  // namespace srlr
