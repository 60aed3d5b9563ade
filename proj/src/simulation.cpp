#include "srlr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "srlr/rng.hpp"

namespace srlr {

namespace {

// Draws `count` distinct indices from {0..size-1} by partial Fisher-Yates;
// returns them ascending.
std::vector<Index> draw_support(NormalSampler& rng, Index size, Index count) {
  std::vector<Index> pool(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index k = 0; k < count; ++k) {
    const Index j = k + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(size - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> chosen(pool.begin(), pool.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

std::pair<Dataset, GroundTruth> generate(const Scenario& sc) {
  if (sc.n < 1 || sc.p < 1 || sc.s_star < 0 || sc.g_star < 0)
    throw std::invalid_argument("generate: bad scenario dimensions");
  if (sc.s_star > sc.p || sc.g_star > sc.n)
    throw std::invalid_argument("generate: s_star <= p and g_star <= n required");
  if (!std::isfinite(sc.outlier_magnitude))
    throw std::invalid_argument("generate: outlier magnitude must be finite");

  const Index n = sc.n, p = sc.p;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  NormalSampler rng(sc.seed);

  // Rows via the stationary AR(1) recursion, exact for Sigma_ij = rho^|i-j|.
  Eigen::MatrixXd X(n, p);
  const double rho = sc.rho_cov;
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (Index i = 0; i < n; ++i) {
    double w = rng.next();
    X(i, 0) = w;
    for (Index t = 1; t < p; ++t) {
      w = rho * w + innovation * rng.next();
      X(i, t) = w;
    }
  }
  X = normalize_columns(X).first;

  GroundTruth truth;
  truth.beta_star = Eigen::VectorXd::Zero(p);
  truth.gamma_star = Eigen::VectorXd::Zero(n);
  truth.S_star = draw_support(rng, p, sc.s_star);
  for (Index j : truth.S_star) truth.beta_star[j] = rng.next() >= 0 ? 1.0 : -1.0;
  truth.G_star = draw_support(rng, n, sc.g_star);
  for (Index i : truth.G_star) truth.gamma_star[i] = sc.outlier_magnitude / sqrt_n;

  Eigen::VectorXd y = X * truth.beta_star + sqrt_n * truth.gamma_star;
  for (Index i = 0; i < n; ++i) y[i] += sc.sigma * rng.next();

  return {Dataset::from_normalized(std::move(X), std::move(y)), std::move(truth)};
}

Metrics evaluate(const Eigen::VectorXd& fit_beta, const PreliminaryFit* prelim,
                 const GroundTruth& truth) {
  if (fit_beta.size() != truth.beta_star.size())
    throw std::invalid_argument("evaluate: dimension mismatch");
  Metrics m;
  m.sq_l2_error = (fit_beta - truth.beta_star).squaredNorm();
  for (Index j = 0; j < fit_beta.size(); ++j) {
    if (fit_beta[j] != 0.0) {
      if (truth.beta_star[j] != 0.0)
        ++m.tp;
      else
        ++m.fp;
    }
  }
  if (prelim) {
    m.support_size_prelim = static_cast<int>(prelim->S_tilde.size() + prelim->G_tilde.size());
    auto contains = [](const std::vector<Index>& sorted, Index v) {
      return std::binary_search(sorted.begin(), sorted.end(), v);
    };
    m.coverage = true;
    for (Index j : truth.S_star)
      if (!contains(prelim->S_tilde, j)) m.coverage = false;
    for (Index i : truth.G_star)
      if (!contains(prelim->G_tilde, i)) m.coverage = false;
  }
  return m;
}

Eigen::VectorXd lasso_baseline(const Dataset& data, int grid_size) {
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(data.p());
  const std::vector<double> grid = lambda_grid(data.X, data.y, w, grid_size);
  const Eigen::VectorXd zero_gamma = Eigen::VectorXd::Zero(data.n());
  Eigen::VectorXd best;
  double best_bic = std::numeric_limits<double>::infinity();
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(data.p());
  for (double lambda : grid) {
    warm = solve_weighted_lasso(data.X, data.y, lambda, w, &warm).coef;
    const double bic = bic_score(data, warm, zero_gamma);
    if (bic < best_bic) {
      best_bic = bic;
      best = warm;
    }
  }
  return best;
}

Eigen::VectorXd oracle_baseline(const Dataset& data, const GroundTruth& truth, int grid_size) {
  const Index n = data.n(), p = data.p();
  const Index g = static_cast<Index>(truth.G_star.size());
  if (g == n) throw std::invalid_argument("oracle_baseline: every row is an outlier");
  if (g == 0) return lasso_baseline(data, grid_size);

  std::vector<char> is_outlier(static_cast<std::size_t>(n), 0);
  for (Index i : truth.G_star) is_outlier[static_cast<std::size_t>(i)] = 1;
  Eigen::MatrixXd X_kept(n - g, p);
  Eigen::VectorXd y_kept(n - g);
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    if (is_outlier[static_cast<std::size_t>(i)]) continue;
    X_kept.row(r) = data.X.row(i);
    y_kept[r] = data.y[i];
    ++r;
  }
  // from_raw renormalizes the kept columns to sqrt(n - g); column_scales maps
  // the fit back to the full-data column units for comparison with beta*.
  const Dataset reduced = Dataset::from_raw(std::move(X_kept), std::move(y_kept));
  const Eigen::VectorXd b = lasso_baseline(reduced, grid_size);
  return b.cwiseProduct(reduced.column_scales);
}

void parallel_reps(int replications, int jobs, const std::function<void(int)>& fn) {
  if (replications < 0) throw std::invalid_argument("parallel_reps: negative count");
  jobs = std::max(1, std::min(jobs, replications));
  if (jobs == 1) {
    for (int rep = 0; rep < replications; ++rep) fn(rep);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (int rep = next.fetch_add(1); rep < replications; rep = next.fetch_add(1)) fn(rep);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

MonteCarloSummary run_monte_carlo(const Scenario& scenario, int replications,
                                  const std::vector<ThresholdingRule>& rules,
                                  const std::vector<std::string>& prelim_variants,
                                  const MonteCarloConfig& config) {
  if (replications < 1) throw std::invalid_argument("run_monte_carlo: replications must be >= 1");
  for (const auto& v : prelim_variants)
    if (v != "pre" && v != "thpre")
      throw std::invalid_argument("run_monte_carlo: unknown preliminary variant '" + v + "'");

  struct Cell {
    Metrics metrics;
    bool ok = false;
  };
  const std::size_t n_cells = prelim_variants.size() * rules.size() + 2;
  std::vector<std::vector<Cell>> results(static_cast<std::size_t>(replications),
                                         std::vector<Cell>(n_cells));
  std::vector<std::string> failure_log(static_cast<std::size_t>(replications));

  auto run_one = [&](int rep) {
    auto& slots = results[static_cast<std::size_t>(rep)];
    Scenario sc = scenario;
    sc.seed = mix_seed(scenario.seed, static_cast<std::uint64_t>(rep));
    try {
      auto [data, truth] = generate(sc);
      std::size_t cell = 0;
      for (const auto& variant : prelim_variants) {
        PipelineConfig pc = config.pipeline;
        pc.threshold_prelim = (variant == "thpre");
        PreliminaryFit prelim;
        bool prelim_ok = true;
        std::vector<double> grid_theta;
        try {
          grid_theta = preliminary_lambda_grid(data, pc.grid_size, pc.prelim_min_ratio);
          prelim = select_preliminary(data, grid_theta, pc.tau_grid, pc.threshold_prelim,
                                      pc.prelim_solver);
        } catch (const std::exception& e) {
          prelim_ok = false;
          failure_log[static_cast<std::size_t>(rep)] += std::string("preliminary: ") + e.what();
        }
        if (prelim_ok && prelim.S_tilde.empty())
          failure_log[static_cast<std::size_t>(rep)] +=
              "preliminary[" + variant + "]: empty coefficient support; ";
        for (const auto& rule : rules) {
          Cell& slot = slots[cell++];
          if (!prelim_ok || prelim.S_tilde.empty()) continue;
          try {
            const Weights weights = compute_weights(prelim, pc.r_w);
            const auto grid_b = default_lambda_beta_grid(data, prelim, weights, pc.grid_size);
            const auto grid_g = default_lambda_gamma_grid(data, prelim, weights, pc.grid_size);
            const FitResult fr =
                select_fit(data, prelim, rule, grid_b, grid_g, pc.r_w, pc.robust);
            slot.metrics = evaluate(fr.beta, &prelim, truth);
            slot.ok = true;
          } catch (const std::exception& e) {
            failure_log[static_cast<std::size_t>(rep)] +=
                std::string("robust[") + rule.name() + "]: " + e.what();
          }
        }
      }
      if (config.include_baselines) {
        Cell& lasso_slot = slots[n_cells - 2];
        lasso_slot.metrics = evaluate(lasso_baseline(data, config.pipeline.grid_size), nullptr, truth);
        lasso_slot.ok = true;
        Cell& oracle_slot = slots[n_cells - 1];
        oracle_slot.metrics =
            evaluate(oracle_baseline(data, truth, config.pipeline.grid_size), nullptr, truth);
        oracle_slot.ok = true;
      }
    } catch (const std::exception& e) {
      failure_log[static_cast<std::size_t>(rep)] += std::string("generate: ") + e.what();
    }
  };

  parallel_reps(replications, config.jobs, run_one);

  MonteCarloSummary summary;
  summary.replications = replications;
  summary.scenario = scenario;
  for (int rep = 0; rep < replications; ++rep) {
    const auto& log = failure_log[static_cast<std::size_t>(rep)];
    if (!log.empty()) {
      ++summary.failures;
      std::fprintf(stderr, "replication %d failed: %s\n", rep, log.c_str());
    }
  }

  // Reduce in replication order so the summary is independent of scheduling.
  auto mean_row = [&](std::size_t cell, const std::string& prelim_name,
                      const std::string& rule_name) {
    SummaryRow row;
    row.prelim = prelim_name;
    row.rule = rule_name;
    row.outlier_pct = scenario.outlier_pct();
    long count = 0;
    for (int rep = 0; rep < replications; ++rep) {
      const Cell& c = results[static_cast<std::size_t>(rep)][cell];
      if (!c.ok) continue;
      ++count;
      row.sq_l2_error += c.metrics.sq_l2_error;
      row.fp += c.metrics.fp;
      row.tp += c.metrics.tp;
      row.support_size += c.metrics.support_size_prelim;
      row.coverage += c.metrics.coverage ? 1.0 : 0.0;
    }
    if (count > 0) {
      const double dc = static_cast<double>(count);
      row.sq_l2_error /= dc;
      row.fp /= dc;
      row.tp /= dc;
      row.support_size /= dc;
      row.coverage /= dc;
    }
    return row;
  };

  std::size_t cell = 0;
  for (const auto& variant : prelim_variants)
    for (const auto& rule : rules) summary.rows.push_back(mean_row(cell++, variant, rule.name()));
  if (config.include_baselines) {
    summary.rows.push_back(mean_row(n_cells - 2, "none", "lasso"));
    summary.rows.push_back(mean_row(n_cells - 1, "none", "oracle"));
  }
  return summary;
}

std::string summary_csv_header() {
  return "prelim,outlier_pct,rule,sq_l2_error,fp,tp,support_size,coverage\n";
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows, bool with_header) {
  std::string out;
  if (with_header) out += summary_csv_header();
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%s,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  r.prelim.c_str(), r.outlier_pct, r.rule.c_str(), r.sq_l2_error, r.fp, r.tp,
                  r.support_size, r.coverage);
    out += buf;
  }
  return out;
}

}  // namespace srlr
