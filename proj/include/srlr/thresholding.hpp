#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace srlr {

enum class RuleKind { Soft, Hard, Scad, Garrote, Mcp };

/// A named thresholding rule Theta(z; lambda), i.e. the closed-form solution
/// of the scalar problem argmin_x (z - x)^2 / 2 + P(x; lambda).
///
/// shape_param is the concavity parameter: SCAD requires a > 2 (default 3.7),
/// MCP requires a > 1 (default 3.0). It is ignored by soft/hard/garrote.
struct ThresholdingRule {
  RuleKind kind = RuleKind::Soft;
  double shape_param = 0.0;

  static ThresholdingRule soft();
  static ThresholdingRule hard();
  static ThresholdingRule scad(double a = 3.7);
  static ThresholdingRule garrote();
  static ThresholdingRule mcp(double a = 3.0);

  /// Parses "soft", "hard", "scad", "garrote", "mcp", optionally with a
  /// shape parameter as in "scad:a=3.0". Throws std::invalid_argument on an
  /// unknown name (the message lists the valid ones) or an invalid parameter.
  static ThresholdingRule parse(std::string_view spec);

  std::string name() const;
};

/// List of valid rule names, for error messages and CLIs.
const std::vector<std::string>& rule_names();

/// Theta(z; lambda). Total in z; requires lambda >= 0.
double theta(const ThresholdingRule& rule, double z, double lambda);

/// psi(z; lambda) = z - Theta(z; lambda), the influence-like function of the
/// implied robust M-estimator.
double psi(const ThresholdingRule& rule, double z, double lambda);

/// The penalty primitive P(t; lambda) whose scalar proximal map is theta():
///   theta(rule, z, lambda) == argmin_x (z - x)^2 / 2 + penalty(rule, x, lambda).
/// Used by objective traces and diagnostics only; solvers need theta() alone.
double penalty(const ThresholdingRule& rule, double t, double lambda);

/// Robust loss Psi(z; lambda) = integral of psi(t; lambda) dt from 0 to z,
/// computed by adaptive Simpson quadrature split at the rule's breakpoints.
/// Soft reproduces the Huber loss, hard the skipped-mean loss, SCAD the
/// Hampel-type loss.
double robust_loss(const ThresholdingRule& rule, double z, double lambda);

/// Outcome of certifying the two clauses of the thresholding-function
/// condition: Theta(x; lambda) = 0 whenever |x| <= lambda, and
/// |Theta(x; lambda) - x| <= lambda everywhere.
struct Condition2Report {
  bool pass = false;
  double worst_zero_slack = 0.0;       // max |Theta| observed on |x| <= lambda
  double worst_proximity_slack = 0.0;  // max(|Theta - x| - lambda) observed
  double witness_z = 0.0;              // location of the worst violation
  double witness_lambda = 0.0;
  long samples = 0;
  double tolerance = 1e-12;
};

/// Evaluates both clauses on a deterministic grid plus seeded random
/// (z, lambda) pairs; sample_count is the total number of pairs examined.
Condition2Report check_condition2(const std::function<double(double, double)>& theta_fn,
                                  long sample_count, std::uint64_t seed = 20240801);
Condition2Report check_condition2(const ThresholdingRule& rule, long sample_count);

}  // namespace srlr
