#include "dehealth/theory.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dehealth::theory {
namespace {

TheoryParams uniform_params(double t_lo, double t_hi, double f_lo, double f_hi) {
  TheoryParams p;
  p.dist_true = BoundedSampler::uniform(t_lo, t_hi);
  p.dist_false = BoundedSampler::uniform(f_lo, f_hi);
  return p;
}

TEST(BoundT1, PluggedExample) {
  // lambda = 0, lambda_bar = 1, delta = 0.5 -> 1 - 2 exp(-1).
  const TheoryParams p = uniform_params(-0.25, 0.25, 0.75, 1.25);
  EXPECT_NEAR(bound_t1(p), 1.0 - 2.0 * std::exp(-1.0), 1e-12);
}

TEST(BoundT1, VanishingGapIsVacuous) {
  const TheoryParams p = uniform_params(0.0, 1.0, 1e-9, 1.0 + 1e-9);
  EXPECT_NEAR(bound_t1(p), -1.0, 1e-9);
}

TEST(BoundT1, HugeRangeIsVacuous) {
  const TheoryParams p = uniform_params(0.0, 1e9, 1.0, 1e9 + 1.0);
  EXPECT_NEAR(bound_t1(p), -1.0, 1e-9);
}

TEST(BoundT1, EqualMeansRejected) {
  const TheoryParams p = uniform_params(0.3, 0.7, 0.1, 0.9);
  EXPECT_THROW(bound_t1(p), std::invalid_argument);
}

TEST(BoundT2, AlphaZeroGivesCertainty) {
  TheoryParams p = uniform_params(0.0, 0.1, 0.5, 0.6);
  p.alpha = 0.0;
  EXPECT_DOUBLE_EQ(bound_t2(p), 1.0);
}

TEST(BoundT3, FullCandidateSetGivesCertainty) {
  TheoryParams p = uniform_params(0.0, 0.1, 0.5, 0.6);
  p.k = p.n2;
  EXPECT_DOUBLE_EQ(bound_t3(p), 1.0);
}

TEST(BoundT4, PluggedExample) {
  // gap = 1, delta = 0.1, alpha=1, n1=10, n2=100, K=10:
  // 1 - exp(ln 1800 - 25).
  TheoryParams p = uniform_params(1.0, 1.1, 0.0, 0.1);
  p.alpha = 1.0;
  p.n1 = 10;
  p.n2 = 100;
  p.k = 10;
  EXPECT_NEAR(bound_t4(p), 1.0 - std::exp(std::log(1800.0) - 25.0), 1e-12);
}

TEST(BoundT4, ParameterViolationsNamed) {
  TheoryParams p = uniform_params(1.0, 1.1, 0.0, 0.1);
  p.alpha = 0.37;  // 3.7 users is not an integer subset
  EXPECT_THROW(bound_t4(p), std::invalid_argument);
  p.alpha = 1.0;
  p.k = p.n2 + 1;
  EXPECT_THROW(bound_t4(p), std::invalid_argument);
}

TEST(Conditions, SpotCaseC2) {
  // |gap| / 2 theta = 10 vs sqrt(2 ln 2 + ln 8) ~ 1.86.
  TheoryParams p = uniform_params(0.0, 0.05, 1.0, 1.05);
  p.n = 2;
  p.n2 = 4;
  EXPECT_TRUE(condition_check(Condition::kC2, p));
}

TEST(Conditions, TinyGapFailsEverything) {
  TheoryParams p = uniform_params(0.0, 1.0, 0.001, 1.001);
  p.n = 10;
  EXPECT_FALSE(condition_check(Condition::kC1, p));
  EXPECT_FALSE(condition_check(Condition::kC2, p));
  EXPECT_FALSE(condition_check(Condition::kC3, p));
  EXPECT_FALSE(condition_check(Condition::kT3ii, p));
  EXPECT_FALSE(condition_check(Condition::kT4ii, p));
}

TEST(Conditions, GrowingNEventuallyFails) {
  TheoryParams p = uniform_params(0.0, 0.25, 1.0, 1.25);  // lhs = 2
  p.n = 2;
  EXPECT_TRUE(condition_check(Condition::kC1, p));
  p.n = 1000000000;
  EXPECT_FALSE(condition_check(Condition::kC1, p));
}

TEST(Rule, DisjointSupportsAlwaysSucceed) {
  const TheoryParams p = uniform_params(0.0, 0.4, 0.6, 1.0);
  const RuleDirection dir = rule_direction(p);
  EXPECT_EQ(dir, RuleDirection::kMinWins);
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const double f_true = p.dist_true.sample(rng);
    const std::vector<double> f_false = {p.dist_false.sample(rng),
                                         p.dist_false.sample(rng)};
    EXPECT_TRUE(rule_deanonymizer(f_true, f_false, dir));
  }
}

TEST(Rule, TiesCountAsFailure) {
  EXPECT_FALSE(rule_deanonymizer(0.5, {0.5}, RuleDirection::kMinWins));
  EXPECT_FALSE(rule_deanonymizer(0.5, {0.5}, RuleDirection::kMaxWins));
  EXPECT_TRUE(rule_deanonymizer(0.4, {0.5}, RuleDirection::kMinWins));
}

TEST(Rule, IdenticalPointMassesRejected) {
  const TheoryParams p = uniform_params(0.5, 0.5, 0.5, 0.5);
  EXPECT_THROW(rule_direction(p), std::invalid_argument);
}

// Numeric-integration oracle for P(X < Y), X ~ U[0,1], Y ~ U[0.5, 1.5].
double overlap_success_oracle() {
  const int steps = 200000;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double y = 0.5 + (i + 0.5) * (1.0 / steps);
    total += std::min(y, 1.0);  // P(X < y)
  }
  return total / steps;
}

TEST(Simulate, OverlappingUniformsMatchIntegrationOracle) {
  const double oracle = overlap_success_oracle();
  EXPECT_NEAR(oracle, 0.875, 1e-5);
  TheoryParams p = uniform_params(0.0, 1.0, 0.5, 1.5);
  p.trials = 100000;
  p.seed = 11;
  const BoundReport r = simulate(Scenario::kPairwiseT1, p);
  EXPECT_NEAR(r.empirical_rate, oracle, 0.005);
  // The matching bound is deeply vacuous here and reported as-is:
  // 1 - 2 exp(-0.5^2 / 4) with delta = 1.
  EXPECT_NEAR(r.bound_value, 1.0 - 2.0 * std::exp(-0.0625), 1e-12);
  EXPECT_TRUE(r.vacuous());
  EXPECT_GE(r.empirical_rate, r.bound_value);  // vacuously satisfied
}

TEST(Simulate, FullCandidateSetAlwaysSucceeds) {
  TheoryParams p = uniform_params(0.0, 1.0, 0.2, 1.2);
  p.n2 = 12;
  p.k = 12;
  p.trials = 2000;
  const BoundReport r = simulate(Scenario::kTopkT3, p);
  EXPECT_DOUBLE_EQ(r.empirical_rate, 1.0);
  EXPECT_DOUBLE_EQ(r.bound_value, 1.0);
}

TEST(Simulate, DisjointSupportsBeatTheBound) {
  TheoryParams p = uniform_params(0.0, 0.1, 3.0, 3.1);
  p.trials = 20000;
  const BoundReport r = simulate(Scenario::kPairwiseT1, p);
  EXPECT_DOUBLE_EQ(r.empirical_rate, 1.0);
  EXPECT_GE(r.empirical_rate, r.bound_value);
  EXPECT_GT(r.bound_value, 0.99);
}

TEST(Simulate, DeterministicGivenSeed) {
  TheoryParams p = uniform_params(0.0, 1.0, 0.4, 1.4);
  p.trials = 5000;
  p.seed = 99;
  const BoundReport a = simulate(Scenario::kPairwiseT1, p);
  const BoundReport b = simulate(Scenario::kPairwiseT1, p);
  EXPECT_DOUBLE_EQ(a.empirical_rate, b.empirical_rate);
}

TEST(Bounds, MonotoneInPopulationAndGap) {
  // t2/t4 fall as alpha, n1, n2 grow; all bounds rise with the gap.
  TheoryParams base = uniform_params(2.0, 2.5, 0.0, 0.5);
  base.n1 = 10;
  base.n2 = 50;
  base.k = 5;
  double prev = bound_t2(base);
  for (const double alpha : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    TheoryParams p = base;
    p.alpha = alpha;
    p.n1 = 10;
    const double b = bound_t2(p);
    if (alpha > 0.2) {
      EXPECT_LE(b, prev + 1e-12);
    }
    prev = b;
  }
  prev = bound_t4(base);
  for (const std::size_t n2 : {60u, 80u, 120u, 200u}) {
    TheoryParams p = base;
    p.n2 = n2;
    const double b = bound_t4(p);
    EXPECT_LE(b, prev + 1e-12);
    prev = b;
  }
  // Gap growth: shift the false distribution away.
  prev = -2.0;
  for (const double shift : {0.0, 0.5, 1.0, 1.5}) {
    TheoryParams p = uniform_params(2.0, 2.5, -shift, 0.5 - shift);
    const double b = bound_t1(p);
    EXPECT_GE(b, prev - 1e-12);
    prev = b;
  }
}

TEST(ReferenceModel, IsProbabilityDistribution) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> f(1 + rng.uniform_index(20));
    for (auto& x : f) x = rng.uniform01() * 3.0;
    f[rng.uniform_index(f.size())] += 0.5;  // at least one strictly positive
    const auto p = reference_model_distribution(f);
    double total = 0.0;
    for (const double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_THROW(reference_model_distribution({0.0, 0.0}), std::invalid_argument);
}

TEST(TruncatedNormal, AnalyticMeanMatchesSampleMean) {
  const auto s = BoundedSampler::truncated_normal(0.3, 0.4, 0.0, 1.0);
  Rng rng(21);
  double total = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = s.sample(rng);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    total += x;
  }
  EXPECT_NEAR(total / n, s.mean(), 0.003);
}

TEST(TruncatedNormal, SymmetricWindowHasSymmetricMean) {
  const auto s = BoundedSampler::truncated_normal(0.0, 1.0, -1.0, 1.0);
  EXPECT_NEAR(s.mean(), 0.0, 1e-15);
}

TEST(Csv, ReportRowsAreWellFormed) {
  TheoryParams p = uniform_params(0.0, 0.1, 1.0, 1.1);
  p.trials = 100;
  const BoundReport r = simulate(Scenario::kPairwiseT1, p);
  std::ostringstream out;
  write_bound_reports_csv({r}, out);
  const std::string s = out.str();
  EXPECT_NE(s.find("scenario,"), std::string::npos);
  EXPECT_NE(s.find("pairwise_t1,"), std::string::npos);
}

}  // namespace
}  // namespace dehealth::theory
