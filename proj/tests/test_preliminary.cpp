#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "srlr/preliminary.hpp"
#include "srlr/rng.hpp"
#include "srlr/simulation.hpp"

using namespace srlr;

namespace {

// Materialized extended design Z = (X, sqrt(n) I) for the equivalence oracle.
Eigen::MatrixXd materialize_z(const Dataset& data) {
  const Index n = data.n(), p = data.p();
  Eigen::MatrixXd Z(n, p + n);
  Z.leftCols(p) = data.X;
  Z.rightCols(n) = std::sqrt(static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, n);
  return Z;
}

Dataset random_dataset(std::uint64_t seed, Index n, Index p) {
  NormalSampler rng(seed);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    y[i] = rng.next();
    for (Index j = 0; j < p; ++j) X(i, j) = rng.next();
  }
  return Dataset::from_raw(X, y);
}

}  // namespace

TEST_SUITE("preliminary") {

TEST_CASE("zero response gives the zero estimate") {
  Eigen::MatrixXd X(5, 2);
  NormalSampler rng(2);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 2; ++j) X(i, j) = rng.next();
  const Dataset d = Dataset::from_raw(X, Eigen::VectorXd::Zero(5));
  const auto fit = fit_preliminary(d, 0.5);
  CHECK(fit.beta_tilde.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.gamma_tilde.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.empty_support());
}

TEST_CASE("lambda at the grid maximum zeroes everything") {
  const Dataset d = random_dataset(41, 12, 3);
  const auto grid = preliminary_lambda_grid(d, 6);
  const auto fit = fit_preliminary(d, grid.front());
  CHECK(fit.beta_tilde.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.gamma_tilde.cwiseAbs().maxCoeff() == 0.0);
  const auto below = fit_preliminary(d, grid.front() * 0.8);
  CHECK(below.S_tilde.size() + below.G_tilde.size() > 0);
}

TEST_CASE("equals the generic solver on the materialized Z") {
  SolverOptions opts;
  opts.tol = 1e-10;
  for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
    const Dataset d = random_dataset(seed, 20, 4);
    const Eigen::MatrixXd Z = materialize_z(d);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(Z.cols());
    for (double lambda : {0.05, 0.2}) {
      const auto fast = fit_preliminary(d, lambda, opts);
      const auto generic = solve_weighted_lasso(Z, d.y, lambda, w, nullptr, opts);
      CHECK((fast.beta_tilde - generic.coef.head(4)).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK((fast.gamma_tilde - generic.coef.tail(20)).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("an injected outlier lands in the gamma support") {
  Scenario sc;
  sc.n = 20;
  sc.p = 2;
  sc.s_star = 1;
  sc.g_star = 1;
  sc.outlier_magnitude = 8.0;
  sc.seed = 99;
  auto [d, truth] = generate(sc);
  const auto fit = fit_preliminary(d, 0.05);
  CHECK(std::binary_search(fit.G_tilde.begin(), fit.G_tilde.end(), truth.G_star[0]));
}

TEST_CASE("threshold_preliminary") {
  PreliminaryFit fit;
  fit.beta_tilde.resize(2);
  fit.beta_tilde << 0.5, 0.05;
  fit.gamma_tilde.resize(1);
  fit.gamma_tilde << 0.0;
  fit.S_tilde = {0, 1};
  fit.lambda_theta = 0.1;

  SUBCASE("tau zero keeps every nonzero") {
    const auto out = threshold_preliminary(fit, 0.0);
    CHECK(out.beta_tilde[0] == 0.5);
    CHECK(out.beta_tilde[1] == 0.05);
    CHECK(out.thresholded);
  }
  SUBCASE("indicator arithmetic") {
    const auto out = threshold_preliminary(fit, 1.0);
    CHECK(out.beta_tilde[0] == 0.5);
    CHECK(out.beta_tilde[1] == 0.0);
    CHECK(out.S_tilde == std::vector<Index>{0});
  }
  SUBCASE("large tau empties the supports and is flagged") {
    const auto out = threshold_preliminary(fit, 100.0);
    CHECK(out.empty_support());
    CHECK(out.note.find("degenerate") != std::string::npos);
  }
  SUBCASE("double thresholding is rejected") {
    const auto once = threshold_preliminary(fit, 0.5);
    CHECK_THROWS_AS(threshold_preliminary(once, 0.5), std::invalid_argument);
  }
  SUBCASE("never enlarges supports") {
    for (double tau : {0.0, 0.3, 1.0, 2.0}) {
      const auto out = threshold_preliminary(fit, tau);
      CHECK(out.S_tilde.size() <= fit.S_tilde.size());
      CHECK(out.G_tilde.size() <= fit.G_tilde.size());
    }
  }
}

TEST_CASE("select_preliminary degenerate grids") {
  const Dataset d = random_dataset(55, 15, 3);
  SUBCASE("single-point grid returns that point") {
    const auto fit = select_preliminary(d, {0.07}, {1.0}, false);
    CHECK(fit.lambda_theta == doctest::Approx(0.07));
  }
  SUBCASE("empty support everywhere returns the least-penalized fit with a warning") {
    const auto grid = preliminary_lambda_grid(d, 4);
    const auto fit = select_preliminary(d, {grid.front() * 2.0, grid.front() * 4.0}, {}, false);
    CHECK(fit.empty_support());
    CHECK(fit.note.find("warning") != std::string::npos);
    CHECK(fit.lambda_theta == doctest::Approx(grid.front() * 2.0));
  }
}

TEST_CASE("select_preliminary sanity on pure noise") {
  // sigma = 1 noise only: the selected coefficient support stays small
  int small_support = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    Scenario sc;
    sc.n = 200;
    sc.p = 5;
    sc.s_star = 0;
    sc.g_star = 0;
    sc.seed = mix_seed(1234, static_cast<std::uint64_t>(rep));
    auto [d, truth] = generate(sc);
    const auto grid = preliminary_lambda_grid(d, 12);
    const auto fit = select_preliminary(d, grid, {}, false);
    if (fit.S_tilde.size() <= 2) ++small_support;
  }
  CHECK(small_support >= 9);  // >= 90% of seeded runs
}

TEST_CASE("screening holds on the moderate design with 5% outliers") {
  // P(S* in S~, G* in G~) >= 0.9 over 50 replications
  const int reps = 50;
  std::vector<int> covered(reps, 0);
  parallel_reps(reps, 4, [&](int rep) {
    Scenario sc;
    sc.n = 200;
    sc.p = 200;
    sc.s_star = 10;
    sc.g_star = 10;
    sc.seed = mix_seed(5150, static_cast<std::uint64_t>(rep));
    auto [d, truth] = generate(sc);
    const auto grid = preliminary_lambda_grid(d, 20);
    const auto prelim = select_preliminary(d, grid, {}, false);
    const Metrics m = evaluate(Eigen::VectorXd::Zero(d.p()), &prelim, truth);
    covered[static_cast<std::size_t>(rep)] = m.coverage ? 1 : 0;
  });
  int hits = 0;
  for (int c : covered) hits += c;
  CHECK(hits >= 45);
}

TEST_CASE("select_preliminary catches a huge outlier") {
  int caught = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    Scenario sc;
    sc.n = 50;
    sc.p = 4;
    sc.s_star = 2;
    sc.g_star = 1;
    sc.outlier_magnitude = 25.0;
    sc.seed = mix_seed(777, static_cast<std::uint64_t>(rep));
    auto [d, truth] = generate(sc);
    const auto grid = preliminary_lambda_grid(d, 12);
    const auto fit = select_preliminary(d, grid, {}, false);
    if (std::binary_search(fit.G_tilde.begin(), fit.G_tilde.end(), truth.G_star[0])) ++caught;
  }
  CHECK(caught == reps);
}

}  // TEST_SUITE
