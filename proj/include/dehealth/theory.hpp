#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehealth/rng.hpp"

namespace dehealth::theory {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double normal_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

// Bounded distance sampler: uniform on [lo, hi] or normal(mu, sigma)
// truncated to [lo, hi]. The support bounds are what enter the theorems'
// range parameters; the mean is analytic.
struct BoundedSampler {
  enum class Kind { kUniform, kTruncatedNormal };

  Kind kind = Kind::kUniform;
  double lo = 0.0;
  double hi = 1.0;
  double mu = 0.0;     // truncated normal only
  double sigma = 1.0;  // truncated normal only

  static BoundedSampler uniform(double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("sampler: lo > hi");
    BoundedSampler s;
    s.kind = Kind::kUniform;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  static BoundedSampler truncated_normal(double mu, double sigma, double lo,
                                         double hi) {
    if (lo >= hi) throw std::invalid_argument("sampler: lo >= hi");
    if (sigma <= 0) throw std::invalid_argument("sampler: sigma <= 0");
    BoundedSampler s;
    s.kind = Kind::kTruncatedNormal;
    s.mu = mu;
    s.sigma = sigma;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  double mean() const {
    if (kind == Kind::kUniform) return 0.5 * (lo + hi);
    const double a = (lo - mu) / sigma;
    const double b = (hi - mu) / sigma;
    const double z = normal_cdf(b) - normal_cdf(a);
    if (z <= 0)
      throw std::invalid_argument("sampler: empty truncation window");
    return mu + sigma * (normal_pdf(a) - normal_pdf(b)) / z;
  }

  double range() const { return hi - lo; }

  double sample(Rng& rng) const {
    if (kind == Kind::kUniform) return rng.uniform(lo, hi);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const double x = rng.normal(mu, sigma);
      if (x >= lo && x <= hi) return x;
    }
    // Narrow window: invert the CDF by bisection instead.
    const double fa = normal_cdf((lo - mu) / sigma);
    const double fb = normal_cdf((hi - mu) / sigma);
    const double target = rng.uniform(fa, fb);
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (normal_cdf((mid - mu) / sigma) < target)
        a = mid;
      else
        b = mid;
    }
    return 0.5 * (a + b);
  }
};

// Parameters of the analytical model: the feature-distance distributions for
// true and false pairs plus the population sizes the bounds refer to.
struct TheoryParams {
  BoundedSampler dist_true;   // f(u, u') on [theta_l, theta_u]
  BoundedSampler dist_false;  // f(u, v), v != u' on [theta_bar_l, theta_bar_u]
  std::size_t n = 100;        // asymptotic parameter in the a.a.s. conditions
  std::size_t n1 = 10;
  std::size_t n2 = 100;
  double alpha = 1.0;
  std::size_t k = 10;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;

  double lambda() const { return dist_true.mean(); }
  double lambda_bar() const { return dist_false.mean(); }
  double theta() const { return dist_true.range(); }
  double theta_bar() const { return dist_false.range(); }
  double delta() const { return std::max(theta(), theta_bar()); }
  double gap() const { return lambda() - lambda_bar(); }

  void require_distinct_means() const {
    if (lambda() == lambda_bar())
      throw std::invalid_argument("theory: lambda == lambda_bar (the theorems require distinct means)");
  }

  void validate_alpha_subset() const {
    const double an1 = alpha * static_cast<double>(n1);
    if (alpha < 0.0 || alpha > 1.0)
      throw std::invalid_argument("theory: alpha must lie in [0, 1]");
    if (std::abs(an1 - std::round(an1)) > 1e-9)
      throw std::invalid_argument("theory: alpha * n1 must be an integer");
  }

  void validate_k() const {
    if (k > n2) throw std::invalid_argument("theory: K must be <= n2");
  }
};

// Proof-specified de-anonymizer: pick argmin f when lambda < lambda_bar,
// argmax otherwise.
enum class RuleDirection { kMinWins, kMaxWins };

inline RuleDirection rule_direction(const TheoryParams& p) {
  p.require_distinct_means();
  return p.lambda() < p.lambda_bar() ? RuleDirection::kMinWins
                                     : RuleDirection::kMaxWins;
}

// True pair wins only strictly; ties count as failure.
inline bool rule_deanonymizer(double f_true, const std::vector<double>& f_false,
                              RuleDirection direction) {
  for (const double f : f_false) {
    if (direction == RuleDirection::kMinWins ? f <= f_true : f >= f_true)
      return false;
  }
  return true;
}

// Top-K rule: the true pair survives when fewer than K false pairs beat or
// tie it (candidate set = K best under the rule).
inline bool topk_rule_success(double f_true, const std::vector<double>& f_false,
                              std::size_t k, RuleDirection direction) {
  std::size_t beaten_by = 0;
  for (const double f : f_false) {
    if (direction == RuleDirection::kMinWins ? f <= f_true : f >= f_true)
      ++beaten_by;
  }
  return beaten_by < k;
}

// Reference probabilistic model M(u,v) = f(u,v) / sum_x f(u,x).
inline std::vector<double> reference_model_distribution(
    const std::vector<double>& f_values) {
  double total = 0.0;
  for (const double f : f_values) {
    if (f < 0)
      throw std::invalid_argument("reference model: f must be nonnegative");
    total += f;
  }
  if (total <= 0)
    throw std::invalid_argument("reference model: all distances are zero");
  std::vector<double> p;
  p.reserve(f_values.size());
  for (const double f : f_values) p.push_back(f / total);
  return p;
}

// --- Bounds (exactly as the theorem statements print them) -------------------

inline double bound_t1(const TheoryParams& p) {
  p.require_distinct_means();
  const double g = p.gap();
  const double d = p.delta();
  return 1.0 - 2.0 * std::exp(-(g * g) / (4.0 * d * d));
}

// Theorem 2 prints theta^2 in the exponent (its proof derives delta^2; the
// statement is implemented as printed).
inline double bound_t2(const TheoryParams& p) {
  p.require_distinct_means();
  p.validate_alpha_subset();
  const double g = p.gap();
  const double t = p.theta();
  const double log_term = std::log(2.0 * p.alpha * static_cast<double>(p.n1) *
                                   static_cast<double>(p.n2));
  return 1.0 - std::exp(log_term - (g * g) / (4.0 * t * t));
}

inline double bound_t3(const TheoryParams& p) {
  p.require_distinct_means();
  p.validate_k();
  const double g = p.gap();
  const double d = p.delta();
  const double log_term =
      std::log(2.0 * static_cast<double>(p.n2 - p.k));
  return 1.0 - std::exp(log_term - (g * g) / (4.0 * d * d));
}

inline double bound_t4(const TheoryParams& p) {
  p.require_distinct_means();
  p.validate_alpha_subset();
  p.validate_k();
  const double g = p.gap();
  const double d = p.delta();
  const double log_term =
      std::log(2.0 * p.alpha * static_cast<double>(p.n1) *
               static_cast<double>(p.n2 - p.k));
  return 1.0 - std::exp(log_term - (g * g) / (4.0 * d * d));
}

// --- a.a.s. conditions --------------------------------------------------------

enum class Condition { kC1, kC2, kC3, kT3ii, kT4ii };

inline bool condition_check(Condition which, const TheoryParams& p) {
  p.require_distinct_means();
  const double lhs = std::abs(p.gap()) / (2.0 * p.theta());
  const double log_n = std::log(static_cast<double>(p.n));
  double inner = 0.0;
  switch (which) {
    case Condition::kC1:
      inner = 2.0 * log_n + std::log(2.0);
      break;
    case Condition::kC2:
      inner = 2.0 * log_n + std::log(2.0 * static_cast<double>(p.n2));
      break;
    case Condition::kC3:
      p.validate_alpha_subset();
      inner = 2.0 * log_n + std::log(2.0 * p.alpha *
                                     static_cast<double>(p.n1) *
                                     static_cast<double>(p.n2));
      break;
    case Condition::kT3ii:
      p.validate_k();
      inner = std::log(2.0 * static_cast<double>(p.n2 - p.k)) + 2.0 * log_n;
      break;
    case Condition::kT4ii:
      p.validate_alpha_subset();
      p.validate_k();
      inner = std::log(2.0 * p.alpha * static_cast<double>(p.n1) *
                       static_cast<double>(p.n2 - p.k)) +
              2.0 * log_n;
      break;
  }
  if (inner <= 0.0) return true;  // the right-hand side degenerates
  return lhs >= std::sqrt(inner);
}

// --- Monte Carlo validation ----------------------------------------------------

enum class Scenario {
  kPairwiseT1,   // one true pair vs one false pair
  kFullC2,       // de-anonymize from all of V2
  kAlphaT2,      // every user of an alpha-subset from V2
  kTopkT3,       // Top-K candidate set from V2
  kAlphaTopkT4,  // Top-K for every user of an alpha-subset
};

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kPairwiseT1: return "pairwise_t1";
    case Scenario::kFullC2: return "full_c2";
    case Scenario::kAlphaT2: return "alpha_t2";
    case Scenario::kTopkT3: return "topk_t3";
    case Scenario::kAlphaTopkT4: return "alpha_topk_t4";
  }
  return "?";
}

struct BoundReport {
  std::string scenario;
  double bound_value = 0.0;
  double empirical_rate = 0.0;
  bool condition_holds = false;
  std::size_t trials = 0;
  double lambda = 0.0, lambda_bar = 0.0, theta = 0.0, theta_bar = 0.0;
  std::size_t n1 = 0, n2 = 0, k = 0;
  double alpha = 0.0;

  bool vacuous() const { return bound_value < 0.0; }
};

inline BoundReport simulate(Scenario scenario, const TheoryParams& p) {
  if (p.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  p.require_distinct_means();
  const RuleDirection direction = rule_direction(p);

  const auto users_per_trial = [&]() -> std::size_t {
    switch (scenario) {
      case Scenario::kAlphaT2:
      case Scenario::kAlphaTopkT4:
        p.validate_alpha_subset();
        return static_cast<std::size_t>(
            std::llround(p.alpha * static_cast<double>(p.n1)));
      default:
        return 1;
    }
  }();
  const bool topk = scenario == Scenario::kTopkT3 ||
                    scenario == Scenario::kAlphaTopkT4;
  if (topk) p.validate_k();
  const std::size_t false_count =
      scenario == Scenario::kPairwiseT1 ? 1 : p.n2 - 1;

  std::size_t successes = 0;
  std::vector<double> f_false(false_count);
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    // Per-trial substream: results do not depend on how trials are batched.
    Rng rng(mix_seed(p.seed, trial));
    bool all_ok = true;
    for (std::size_t u = 0; u < users_per_trial && all_ok; ++u) {
      const double f_true = p.dist_true.sample(rng);
      for (auto& f : f_false) f = p.dist_false.sample(rng);
      all_ok = topk ? topk_rule_success(f_true, f_false, p.k, direction)
                    : rule_deanonymizer(f_true, f_false, direction);
    }
    if (all_ok) ++successes;
  }

  BoundReport report;
  report.scenario = scenario_name(scenario);
  report.empirical_rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  report.trials = p.trials;
  switch (scenario) {
    case Scenario::kPairwiseT1:
      report.bound_value = bound_t1(p);
      report.condition_holds = condition_check(Condition::kC1, p);
      break;
    case Scenario::kFullC2: {
      // The union step in Corollary 2's proof: failure <= 2 n2 exp(...).
      const double g = p.gap(), d = p.delta();
      report.bound_value =
          1.0 - std::exp(std::log(2.0 * static_cast<double>(p.n2)) -
                         (g * g) / (4.0 * d * d));
      report.condition_holds = condition_check(Condition::kC2, p);
      break;
    }
    case Scenario::kAlphaT2:
      report.bound_value = bound_t2(p);
      report.condition_holds = condition_check(Condition::kC3, p);
      break;
    case Scenario::kTopkT3:
      report.bound_value = bound_t3(p);
      report.condition_holds = condition_check(Condition::kT3ii, p);
      break;
    case Scenario::kAlphaTopkT4:
      report.bound_value = bound_t4(p);
      report.condition_holds = condition_check(Condition::kT4ii, p);
      break;
  }
  report.lambda = p.lambda();
  report.lambda_bar = p.lambda_bar();
  report.theta = p.theta();
  report.theta_bar = p.theta_bar();
  report.n1 = p.n1;
  report.n2 = p.n2;
  report.k = p.k;
  report.alpha = p.alpha;
  return report;
}

inline void write_bound_reports_csv(const std::vector<BoundReport>& reports,
                                    std::ostream& out) {
  out << "scenario,lambda,lambda_bar,theta,theta_bar,n1,n2,k,alpha,"
         "bound,empirical,trials,condition_holds,vacuous\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%.17g,%.17g,%.17g,%.17g,%zu,%zu,%zu,%.17g,%.17g,%.17g,"
                  "%zu,%d,%d\n",
                  r.scenario.c_str(), r.lambda, r.lambda_bar, r.theta,
                  r.theta_bar, r.n1, r.n2, r.k, r.alpha, r.bound_value,
                  r.empirical_rate, r.trials, r.condition_holds ? 1 : 0,
                  r.vacuous() ? 1 : 0);
    out << buf;
  }
}

}  // namespace dehealth::theory
