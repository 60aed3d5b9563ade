#include <doctest.h>

#include <cmath>

#include "srlr/rng.hpp"
#include "srlr/simulation.hpp"

using namespace srlr;

TEST_SUITE("simulation") {

TEST_CASE("generation honors the scenario contract") {
  Scenario sc;
  sc.n = 200;
  sc.p = 200;
  sc.s_star = 10;
  sc.g_star = 10;
  sc.outlier_magnitude = 8.0;
  sc.seed = 42;
  auto [d, truth] = generate(sc);

  SUBCASE("dimensions and supports") {
    CHECK(d.n() == 200);
    CHECK(d.p() == 200);
    CHECK(truth.S_star.size() == 10);
    CHECK(truth.G_star.size() == 10);
    CHECK(support_of(truth.beta_star) == truth.S_star);
    CHECK(support_of(truth.gamma_star) == truth.G_star);
    for (Index j : truth.S_star) CHECK(std::abs(truth.beta_star[j]) == 1.0);
  }
  SUBCASE("column norms are exactly sqrt(n)") {
    const double sqrt_n = std::sqrt(200.0);
    for (Index j = 0; j < d.p(); ++j)
      CHECK(std::abs(d.X.col(j).norm() - sqrt_n) <= 1e-10 * sqrt_n);
    CHECK((d.column_scales - Eigen::VectorXd::Ones(200)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("each outlier adds exactly its magnitude to y") {
    // regenerate noiselessly to isolate the shift
    Scenario clean = sc;
    clean.sigma = 0.0;
    auto [dc, tc] = generate(clean);
    const Eigen::VectorXd signal = dc.X * tc.beta_star;
    for (Index i : tc.G_star) CHECK(dc.y[i] - signal[i] == doctest::Approx(8.0).epsilon(1e-12));
  }
}

TEST_CASE("noiseless null scenario gives a zero response") {
  Scenario sc;
  sc.n = 30;
  sc.p = 5;
  sc.s_star = 0;
  sc.g_star = 0;
  sc.sigma = 0.0;
  sc.seed = 9;
  auto [d, truth] = generate(sc);
  CHECK(d.y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fixed seed reproduces bit-identical draws") {
  Scenario sc;
  sc.n = 50;
  sc.p = 20;
  sc.s_star = 4;
  sc.g_star = 3;
  sc.seed = 123456;
  auto [d1, t1] = generate(sc);
  auto [d2, t2] = generate(sc);
  CHECK((d1.X - d2.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d1.y - d2.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t1.S_star == t2.S_star);
  CHECK(t1.G_star == t2.G_star);

  Scenario other = sc;
  other.seed = 123457;
  auto [d3, t3] = generate(other);
  CHECK((d1.y - d3.y).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("AR(1) columns carry the intended correlation") {
  Scenario sc;
  sc.n = 4000;
  sc.p = 3;
  sc.s_star = 0;
  sc.g_star = 0;
  sc.sigma = 0.0;
  sc.rho_cov = 0.3;
  sc.seed = 31;
  auto [d, truth] = generate(sc);
  const double c01 = d.X.col(0).dot(d.X.col(1)) / 4000.0;
  const double c02 = d.X.col(0).dot(d.X.col(2)) / 4000.0;
  CHECK(c01 == doctest::Approx(0.3).epsilon(0.15));
  CHECK(c02 == doctest::Approx(0.09).epsilon(0.5));
}

TEST_CASE("evaluate arithmetic") {
  GroundTruth truth;
  truth.beta_star.resize(3);
  truth.beta_star << 1.0, -1.0, 0.0;
  truth.S_star = {0, 1};
  truth.gamma_star = Eigen::VectorXd::Zero(2);

  Eigen::VectorXd est(3);
  est << 0.9, 0.0, 0.2;
  const Metrics m = evaluate(est, nullptr, truth);
  CHECK(m.sq_l2_error == doctest::Approx(0.01 + 1.0 + 0.04));
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);

  const Metrics exact = evaluate(truth.beta_star, nullptr, truth);
  CHECK(exact.sq_l2_error == 0.0);
  CHECK(exact.tp == 2);
  CHECK(exact.fp == 0);
}

TEST_CASE("coverage requires both inclusions") {
  GroundTruth truth;
  truth.beta_star.resize(4);
  truth.beta_star << 1, 0, 0, 0;
  truth.S_star = {0};
  truth.gamma_star.resize(3);
  truth.gamma_star << 0, 0.5, 0;
  truth.G_star = {1};

  PreliminaryFit prelim;
  prelim.beta_tilde.resize(4);
  prelim.beta_tilde << 0.8, 0.1, 0, 0;
  prelim.S_tilde = {0, 1};
  prelim.gamma_tilde.resize(3);
  prelim.gamma_tilde << 0, 0.4, 0;
  prelim.G_tilde = {1};

  CHECK(evaluate(truth.beta_star, &prelim, truth).coverage);
  CHECK(evaluate(truth.beta_star, &prelim, truth).support_size_prelim == 3);

  prelim.S_tilde = {1};  // drops the true coefficient
  CHECK_FALSE(evaluate(truth.beta_star, &prelim, truth).coverage);
}

TEST_CASE("coverage is monotone under support enlargement") {
  GroundTruth truth;
  truth.beta_star.resize(5);
  truth.beta_star << 1, 0, -1, 0, 0;
  truth.S_star = {0, 2};
  truth.gamma_star.resize(4);
  truth.gamma_star << 0, 0.5, 0, 0.5;
  truth.G_star = {1, 3};

  PreliminaryFit small;
  small.beta_tilde = truth.beta_star;
  small.gamma_tilde = truth.gamma_star;
  small.S_tilde = {0, 2};
  small.G_tilde = {1, 3};
  PreliminaryFit big = small;
  big.S_tilde = {0, 1, 2, 4};
  big.G_tilde = {0, 1, 3};

  const Eigen::VectorXd est = truth.beta_star;
  CHECK(evaluate(est, &small, truth).coverage);
  CHECK(evaluate(est, &big, truth).coverage);  // enlarging never loses coverage

  PreliminaryFit missing = small;
  missing.G_tilde = {1};
  CHECK_FALSE(evaluate(est, &missing, truth).coverage);
}

TEST_CASE("oracle baseline lands near the reported full-scale mean") {
  // full-scale mean over 100 replications is 0.3514; the 30-replication desk
  // run stays in a generous band around it
  const int reps = 30;
  std::vector<double> errs(reps, 0.0);
  parallel_reps(reps, 4, [&](int rep) {
    Scenario sc;
    sc.n = 200;
    sc.p = 200;
    sc.s_star = 10;
    sc.g_star = 10;
    sc.seed = mix_seed(31415, static_cast<std::uint64_t>(rep));
    auto [d, truth] = generate(sc);
    errs[static_cast<std::size_t>(rep)] =
        evaluate(oracle_baseline(d, truth), nullptr, truth).sq_l2_error;
  });
  double mean = 0.0;
  for (double e : errs) mean += e / reps;
  CHECK(mean >= 0.1);
  CHECK(mean <= 1.0);
}

TEST_CASE("baselines") {
  SUBCASE("zero response gives the zero vector") {
    NormalSampler rng(3);
    Eigen::MatrixXd X(10, 3);
    for (Index i = 0; i < 10; ++i)
      for (Index j = 0; j < 3; ++j) X(i, j) = rng.next();
    const Dataset d = Dataset::from_raw(X, Eigen::VectorXd::Zero(10));
    CHECK(lasso_baseline(d).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("oracle with no outliers is the plain baseline") {
    Scenario sc;
    sc.n = 60;
    sc.p = 8;
    sc.s_star = 2;
    sc.g_star = 0;
    sc.seed = 77;
    auto [d, truth] = generate(sc);
    CHECK((oracle_baseline(d, truth) - lasso_baseline(d)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("oracle rejects all-outlier data") {
    Scenario sc;
    sc.n = 10;
    sc.p = 2;
    sc.s_star = 1;
    sc.g_star = 10;
    sc.seed = 5;
    auto [d, truth] = generate(sc);
    CHECK_THROWS_AS(oracle_baseline(d, truth), std::invalid_argument);
  }
  SUBCASE("clean data: near-oracle support recovery") {
    int good = 0;
    for (int rep = 0; rep < 5; ++rep) {
      Scenario sc;
      sc.n = 100;
      sc.p = 10;
      sc.s_star = 3;
      sc.g_star = 0;
      sc.seed = mix_seed(909, static_cast<std::uint64_t>(rep));
      auto [d, truth] = generate(sc);
      const Metrics m = evaluate(lasso_baseline(d), nullptr, truth);
      if (m.tp == 3 && m.sq_l2_error < 0.5) ++good;
    }
    CHECK(good >= 4);
  }
}

TEST_CASE("monte carlo determinism and shape") {
  Scenario sc;
  sc.n = 40;
  sc.p = 10;
  sc.s_star = 2;
  sc.g_star = 2;
  sc.seed = 2024;
  MonteCarloConfig cfg;
  cfg.pipeline.grid_size = 6;

  const std::vector<ThresholdingRule> rules = {ThresholdingRule::soft(),
                                               ThresholdingRule::hard()};
  const MonteCarloSummary a = run_monte_carlo(sc, 3, rules, {"pre"}, cfg);
  REQUIRE(a.rows.size() == 4);  // 2 rules + lasso + oracle
  CHECK(a.rows[0].prelim == "pre");
  CHECK(a.rows[0].rule == "soft");
  CHECK(a.rows[2].rule == "lasso");
  CHECK(a.rows[3].rule == "oracle");
  CHECK(a.rows[0].outlier_pct == doctest::Approx(5.0));
  CHECK(a.failures == 0);

  SUBCASE("identical summary from a second run") {
    const MonteCarloSummary b = run_monte_carlo(sc, 3, rules, {"pre"}, cfg);
    CHECK(summary_to_csv(a.rows) == summary_to_csv(b.rows));
  }
  SUBCASE("jobs do not change the numbers") {
    MonteCarloConfig par = cfg;
    par.jobs = 4;
    const MonteCarloSummary b = run_monte_carlo(sc, 3, rules, {"pre"}, par);
    CHECK(summary_to_csv(a.rows) == summary_to_csv(b.rows));
  }
  SUBCASE("replications = 1 equals a single evaluated pipeline run") {
    MonteCarloConfig one = cfg;
    one.include_baselines = false;
    const MonteCarloSummary b = run_monte_carlo(sc, 1, {ThresholdingRule::hard()}, {"pre"}, one);
    Scenario rep0 = sc;
    rep0.seed = mix_seed(sc.seed, 0);
    auto [d, truth] = generate(rep0);
    PipelineConfig pc = one.pipeline;
    const PipelineResult direct = full_pipeline(d, ThresholdingRule::hard(), pc);
    const Metrics m = evaluate(direct.fit.beta, &direct.prelim, truth);
    CHECK(b.rows[0].sq_l2_error == doctest::Approx(m.sq_l2_error).epsilon(1e-12));
    CHECK(b.rows[0].tp == doctest::Approx(m.tp));
    CHECK(b.rows[0].fp == doctest::Approx(m.fp));
  }
}

TEST_CASE("csv layout") {
  SummaryRow row;
  row.prelim = "pre";
  row.outlier_pct = 5;
  row.rule = "scad";
  row.sq_l2_error = 0.1026;
  row.fp = 0.97;
  row.tp = 10;
  row.support_size = 25.5;
  row.coverage = 1;
  const std::string csv = summary_to_csv({row});
  CHECK(csv == "prelim,outlier_pct,rule,sq_l2_error,fp,tp,support_size,coverage\n"
               "pre,5,scad,0.1026,0.97,10,25.5,1\n");
}

}  // TEST_SUITE
