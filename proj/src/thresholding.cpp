#include "srlr/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srlr/rng.hpp"

namespace srlr {

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

void validate(const ThresholdingRule& rule) {
  if (rule.kind == RuleKind::Scad && !(rule.shape_param > 2.0))
    throw std::invalid_argument("scad requires shape parameter a > 2");
  if (rule.kind == RuleKind::Mcp && !(rule.shape_param > 1.0))
    throw std::invalid_argument("mcp requires shape parameter a > 1");
}

}  // namespace

ThresholdingRule ThresholdingRule::soft() { return {RuleKind::Soft, 0.0}; }
ThresholdingRule ThresholdingRule::hard() { return {RuleKind::Hard, 0.0}; }
ThresholdingRule ThresholdingRule::scad(double a) {
  ThresholdingRule r{RuleKind::Scad, a};
  validate(r);
  return r;
}
ThresholdingRule ThresholdingRule::garrote() { return {RuleKind::Garrote, 0.0}; }
ThresholdingRule ThresholdingRule::mcp(double a) {
  ThresholdingRule r{RuleKind::Mcp, a};
  validate(r);
  return r;
}

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = {"soft", "hard", "scad", "garrote", "mcp"};
  return names;
}

ThresholdingRule ThresholdingRule::parse(std::string_view spec) {
  std::string name(spec);
  double a = 0.0;
  bool has_a = false;
  if (auto pos = name.find(':'); pos != std::string::npos) {
    std::string param = name.substr(pos + 1);
    name.resize(pos);
    if (param.rfind("a=", 0) != 0)
      throw std::invalid_argument("unrecognized rule parameter '" + param + "' (expected a=<real>)");
    try {
      a = std::stod(param.substr(2));
    } catch (const std::exception&) {
      throw std::invalid_argument("could not parse rule parameter '" + param + "'");
    }
    has_a = true;
  }
  if (name == "soft") return soft();
  if (name == "hard") return hard();
  if (name == "scad") return has_a ? scad(a) : scad();
  if (name == "garrote") return garrote();
  if (name == "mcp") return has_a ? mcp(a) : mcp();
  std::string valid;
  for (const auto& v : rule_names()) valid += (valid.empty() ? "" : ", ") + v;
  throw std::invalid_argument("unknown rule '" + name + "' (valid: " + valid + ")");
}

std::string ThresholdingRule::name() const {
  switch (kind) {
    case RuleKind::Soft: return "soft";
    case RuleKind::Hard: return "hard";
    case RuleKind::Scad: return "scad";
    case RuleKind::Garrote: return "garrote";
    case RuleKind::Mcp: return "mcp";
  }
  return "?";
}

double theta(const ThresholdingRule& rule, double z, double lambda) {
  if (lambda < 0) throw std::invalid_argument("theta requires lambda >= 0");
  const double az = std::abs(z);
  switch (rule.kind) {
    case RuleKind::Soft:
      return sgn(z) * std::max(az - lambda, 0.0);
    case RuleKind::Hard:
      return az > lambda ? z : 0.0;
    case RuleKind::Scad: {
      const double a = rule.shape_param;
      if (az <= 2.0 * lambda) return sgn(z) * std::max(az - lambda, 0.0);
      if (az < a * lambda) return ((a - 1.0) * z - a * lambda * sgn(z)) / (a - 2.0);
      return z;  // the middle branch meets the identity at |z| = a lambda
    }
    case RuleKind::Garrote:
      return az > lambda ? z - lambda * lambda / z : 0.0;
    case RuleKind::Mcp: {
      const double a = rule.shape_param;
      if (az >= a * lambda) return z;
      return sgn(z) * std::max(az - lambda, 0.0) / (1.0 - 1.0 / a);
    }
  }
  return 0.0;
}

// z - Theta(z; lambda), written branchwise so the tail identities hold
// exactly in floating point (clamp for soft, hard zero past the threshold,
// lambda^2/z for the garrote).
double psi(const ThresholdingRule& rule, double z, double lambda) {
  if (lambda < 0) throw std::invalid_argument("psi requires lambda >= 0");
  const double az = std::abs(z);
  if (az <= lambda) return z;
  switch (rule.kind) {
    case RuleKind::Soft:
      return sgn(z) * lambda;
    case RuleKind::Hard:
      return 0.0;
    case RuleKind::Scad: {
      const double a = rule.shape_param;
      if (az <= 2.0 * lambda) return sgn(z) * lambda;
      if (az < a * lambda) return sgn(z) * (a * lambda - az) / (a - 2.0);
      return 0.0;
    }
    case RuleKind::Garrote:
      return lambda * lambda / z;
    case RuleKind::Mcp: {
      const double a = rule.shape_param;
      if (az >= a * lambda) return 0.0;
      return sgn(z) * (a * lambda - az) / (a - 1.0);
    }
  }
  return 0.0;
}

double penalty(const ThresholdingRule& rule, double t, double lambda) {
  if (lambda < 0) throw std::invalid_argument("penalty requires lambda >= 0");
  const double at = std::abs(t);
  switch (rule.kind) {
    case RuleKind::Soft:
      return lambda * at;
    case RuleKind::Hard:
      return t != 0.0 ? 0.5 * lambda * lambda : 0.0;
    case RuleKind::Scad: {
      const double a = rule.shape_param;
      if (at <= lambda) return lambda * at;
      if (at <= a * lambda)
        return (2.0 * a * lambda * at - at * at - lambda * lambda) / (2.0 * (a - 1.0));
      return 0.5 * (a + 1.0) * lambda * lambda;
    }
    case RuleKind::Garrote: {
      // Primitive of P'(u) = (sqrt(u^2 + 4 lambda^2) - u) / 2, the inverse
      // construction that makes the garrote thresholder the proximal map.
      if (lambda == 0.0) return 0.0;
      const double c = 2.0 * lambda;
      return 0.5 * (0.5 * at * std::sqrt(at * at + c * c) +
                    0.5 * c * c * std::asinh(at / c) - 0.5 * at * at);
    }
    case RuleKind::Mcp: {
      const double a = rule.shape_param;
      if (at <= a * lambda) return lambda * at - t * t / (2.0 * a);
      return 0.5 * a * lambda * lambda;
    }
  }
  return 0.0;
}

namespace {

// Breakpoints of psi(.; lambda) on [0, inf): quadrature splits here so each
// panel integrates a smooth function.
std::vector<double> psi_breakpoints(const ThresholdingRule& rule, double lambda) {
  switch (rule.kind) {
    case RuleKind::Soft:
    case RuleKind::Hard:
    case RuleKind::Garrote:
      return {lambda};
    case RuleKind::Scad:
      return {lambda, 2.0 * lambda, rule.shape_param * lambda};
    case RuleKind::Mcp:
      return {lambda, rule.shape_param * lambda};
  }
  return {};
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

}  // namespace

double robust_loss(const ThresholdingRule& rule, double z, double lambda) {
  if (lambda < 0) throw std::invalid_argument("robust_loss requires lambda >= 0");
  const double az = std::abs(z);
  if (az == 0.0) return 0.0;
  auto f = [&](double t) { return psi(rule, t, lambda); };
  // psi is odd, so Psi is even: integrate over [0, |z|] in smooth panels.
  std::vector<double> cuts = psi_breakpoints(rule, lambda);
  cuts.push_back(0.0);
  cuts.push_back(az);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = std::min(cuts[k + 1], az);
    if (lo >= az) break;
    total += integrate(f, lo, hi, 1e-12 * std::max(1.0, hi - lo));
  }
  return total;
}

Condition2Report check_condition2(const std::function<double(double, double)>& theta_fn,
                                  long sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  Condition2Report report;
  report.samples = 0;

  auto examine = [&](double z, double lambda) {
    const double th = theta_fn(z, lambda);
    if (std::abs(z) <= lambda) {
      const double slack = std::abs(th);
      if (slack > report.worst_zero_slack) {
        report.worst_zero_slack = slack;
        if (slack > report.tolerance) {
          report.witness_z = z;
          report.witness_lambda = lambda;
        }
      }
    }
    const double slack = std::abs(th - z) - lambda;
    if (slack > report.worst_proximity_slack) {
      report.worst_proximity_slack = slack;
      if (slack > report.tolerance) {
        report.witness_z = z;
        report.witness_lambda = lambda;
      }
    }
    ++report.samples;
  };

  // Deterministic grid: a handful of lambdas crossed with z sweeping through
  // every regime (inside the dead zone, the bias range, far tails).
  const double lambdas[] = {0.0, 0.1, 0.5, 1.0, 2.0, 7.5};
  const long grid_per_lambda = std::max<long>(1, sample_count / 12);
  for (double lambda : lambdas) {
    const double span = 12.0 * std::max(lambda, 1.0);
    for (long i = 0; i < grid_per_lambda && report.samples < sample_count; ++i) {
      const double z = -span + 2.0 * span * static_cast<double>(i) /
                                   static_cast<double>(std::max<long>(1, grid_per_lambda - 1));
      examine(z, lambda);
    }
  }
  // Random pairs fill the remaining budget.
  NormalSampler rng(seed);
  while (report.samples < sample_count) {
    const double lambda = 5.0 * rng.uniform();
    const double z = (rng.uniform() - 0.5) * 24.0 * std::max(lambda, 1.0);
    examine(z, lambda);
  }

  report.pass = report.worst_zero_slack <= report.tolerance &&
                report.worst_proximity_slack <= report.tolerance;
  return report;
}

Condition2Report check_condition2(const ThresholdingRule& rule, long sample_count) {
  return check_condition2(
      [&rule](double z, double lambda) { return theta(rule, z, lambda); }, sample_count);
}

}  // namespace srlr
