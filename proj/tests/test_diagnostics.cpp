#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "srlr/diagnostics.hpp"
#include "srlr/rng.hpp"

using namespace srlr;

namespace {

Eigen::MatrixXd random_matrix(std::uint64_t seed, Eigen::Index n, Eigen::Index p) {
  NormalSampler rng(seed);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rng.next();
  return X;
}

// Random-direction Rayleigh oracle over every support of size u: samples many
// sparse directions and minimizes ||X d||^2 / (n ||d||^2). Independent of the
// Jacobi route inside the library.
double rayleigh_min_oracle(const Eigen::MatrixXd& X, int u, std::uint64_t seed) {
  NormalSampler rng(seed);
  const double dn = static_cast<double>(X.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> support(static_cast<std::size_t>(u));
  std::function<void(int, int)> recurse = [&](int next, int depth) {
    if (depth == u) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(X.cols());
      for (int trial = 0; trial < 4000; ++trial) {
        for (int k = 0; k < u; ++k) d[support[static_cast<std::size_t>(k)]] = rng.next();
        const double q = (X * d).squaredNorm() / (dn * d.squaredNorm());
        best = std::min(best, q);
      }
      return;
    }
    for (int j = next; j < static_cast<int>(X.cols()); ++j) {
      support[static_cast<std::size_t>(depth)] = j;
      recurse(j + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("orthonormal design has unit restricted eigenvalues") {
  const Eigen::Index n = 5;
  const Eigen::MatrixXd X = std::sqrt(static_cast<double>(n)) *
                            Eigen::MatrixXd::Identity(n, 4);
  for (int u = 1; u <= 4; ++u)
    CHECK(restricted_min_eigenvalue(X, u) == doctest::Approx(1.0).epsilon(1e-10));
  // with the full row set, delta_max is also 1
  CHECK(restricted_max_eigenvalue(X, 2, static_cast<int>(n)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a duplicated column collapses delta_min at u = 2") {
  Eigen::MatrixXd X = random_matrix(3, 8, 4);
  X.col(3) = X.col(1);
  CHECK(restricted_min_eigenvalue(X, 2) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("sqrt(2) identity example") {
  const Eigen::MatrixXd X = std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2);
  CHECK(restricted_max_eigenvalue(X, 1, 1) == doctest::Approx(1.0));
}

TEST_CASE("matches the Rayleigh-direction oracle") {
  const Eigen::MatrixXd X = random_matrix(17, 8, 5);
  for (int u : {1, 2, 3}) {
    const double exact = restricted_min_eigenvalue(X, u);
    const double sampled = rayleigh_min_oracle(X, u, 1000 + static_cast<std::uint64_t>(u));
    CHECK(sampled >= exact - 1e-9);       // sampling can only overshoot
    CHECK(sampled - exact <= 0.05 * std::max(1.0, exact) + 0.02);
  }
  // u = p: direct smallest eigenvalue of the full Gram, second route via Eigen
  const Eigen::MatrixXd gram = X.transpose() * X / 8.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  CHECK(restricted_min_eigenvalue(X, 5) ==
        doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-9));
  CHECK(restricted_max_eigenvalue(X, 5, 8) ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-9));
}

TEST_CASE("monotonicity in u and u'") {
  const Eigen::MatrixXd X = random_matrix(23, 7, 5);
  double prev_min = std::numeric_limits<double>::infinity();
  for (int u = 1; u <= 5; ++u) {
    const double cur = restricted_min_eigenvalue(X, u);
    CHECK(cur <= prev_min + 1e-12);
    prev_min = cur;
  }
  double prev_max = 0.0;
  for (int u = 1; u <= 5; ++u) {
    const double cur = restricted_max_eigenvalue(X, u, 3);
    CHECK(cur >= prev_max - 1e-12);
    prev_max = cur;
  }
  prev_max = 0.0;
  for (int up = 1; up <= 7; ++up) {
    const double cur = restricted_max_eigenvalue(X, 2, up);
    CHECK(cur >= prev_max - 1e-12);
    prev_max = cur;
  }
  // delta_min(u) <= delta_max(u, n)
  for (int u = 1; u <= 5; ++u)
    CHECK(restricted_min_eigenvalue(X, u) <= restricted_max_eigenvalue(X, u, 7) + 1e-12);
}

TEST_CASE("elementwise bound always holds") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Eigen::MatrixXd X = random_matrix(seed + 31, 6, 4);
    for (int u : {1, 2}) {
      for (int up : {1, 3}) {
        const double dm = restricted_max_eigenvalue(X, u, up);
        const double bound = X.cwiseAbs2().maxCoeff() * u * up / 6.0;
        CHECK(dm <= bound + 1e-12);
      }
    }
  }
}

TEST_CASE("contraction factor") {
  CHECK(contraction_factor(std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2), 1, 1, 1.0) ==
        doctest::Approx(2.0));
  const Eigen::MatrixXd X = random_matrix(77, 6, 4);
  const double dm = restricted_max_eigenvalue(X, 1, 1);
  SUBCASE("arithmetic") {
    CHECK(contraction_factor(X, 1, 1, 1.0) == doctest::Approx(2.0 * dm));
    CHECK(contraction_factor(X, 1, 1, 2.0 * dm) == doctest::Approx(1.0));
  }
  SUBCASE("report flags rho >= 1") {
    const EigenReport at_boundary = eigen_report(X, 1, 1, 2.0 * dm);
    CHECK(at_boundary.rho == doctest::Approx(1.0));
    CHECK(at_boundary.rho_flagged);
    const EigenReport comfortable = eigen_report(X, 1, 1, 4.0 * dm);
    CHECK_FALSE(comfortable.rho_flagged);
  }
}

TEST_CASE("combinatorial guards") {
  const Eigen::MatrixXd wide = random_matrix(5, 6, 13);
  CHECK_THROWS_WITH_AS(restricted_min_eigenvalue(wide, 2), doctest::Contains("p <= 12"),
                       std::invalid_argument);
  const Eigen::MatrixXd tall = random_matrix(6, 15, 4);
  CHECK_THROWS_WITH_AS(restricted_max_eigenvalue(tall, 2, 2), doctest::Contains("n <= 14"),
                       std::invalid_argument);
  const Eigen::MatrixXd ok = random_matrix(7, 6, 4);
  CHECK_THROWS_AS(restricted_min_eigenvalue(ok, 5), std::invalid_argument);
  CHECK_THROWS_AS(restricted_max_eigenvalue(ok, 1, 7), std::invalid_argument);
}

TEST_CASE("report bookkeeping") {
  const Eigen::MatrixXd X = random_matrix(8, 6, 4);
  const EigenReport report = eigen_report(X, 2, 3, 1.0);
  CHECK(report.delta_min <= report.delta_max + 1e-12);
  CHECK(report.bound_35 >= report.delta_max - 1e-12);
  // C(4,2) * (1 + C(6,3)) = 6 * 21 = 126
  CHECK(report.supports_examined == 126);
}

}  // TEST_SUITE
