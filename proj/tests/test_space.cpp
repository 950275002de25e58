#include <gtest/gtest.h>

#include <cmath>

#include "npr/sampling.hpp"
#include "npr/space.hpp"
#include "support/generators.hpp"

using namespace npr;

namespace {

AtomSet of(std::initializer_list<std::size_t> atoms) {
  AtomSet s;
  for (auto a : atoms) s.insert(a);
  return s;
}

// Direct count of sample points a hypothesis labels 0.
double counted_miss_rate(AtomSet h, const Sample& s) {
  std::size_t miss = 0;
  for (auto x : s.draws) miss += !h.contains(x);
  return static_cast<double>(miss) / static_cast<double>(s.draws.size());
}

}  // namespace

TEST(AtomSet, BasicAlgebra) {
  AtomSet s = of({1, 3, 5});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.first(), 1u);
  EXPECT_TRUE(of({3}).is_subset_of(s));
  EXPECT_TRUE(of({3}).is_proper_subset_of(s));
  EXPECT_FALSE(s.is_proper_subset_of(s));
  EXPECT_EQ(s.complement(6), of({0, 2, 4}));
  EXPECT_EQ(s.minus(of({1, 2})), of({3, 5}));
  EXPECT_EQ(AtomSet::full(64).size(), 64u);
  EXPECT_EQ(s.members(), (std::vector<std::size_t>{1, 3, 5}));
}

TEST(FiniteSpace, RejectsEmptyAndDuplicateLabels) {
  EXPECT_THROW(FiniteSpace(0), InvalidArgument);
  EXPECT_THROW(FiniteSpace(65), InvalidArgument);
  EXPECT_THROW(FiniteSpace(std::vector<std::string>{"a", "a"}), InvalidArgument);
  FiniteSpace s({"a", "b"});
  EXPECT_EQ(s.index_of("b"), 1u);
  EXPECT_THROW(s.index_of("c"), InputError);
}

TEST(HypothesisClass, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(HypothesisClass(3, {of({0}), of({0})}), InvalidArgument);
  EXPECT_THROW(HypothesisClass(3, {}), InvalidArgument);
  EXPECT_THROW(HypothesisClass(2, {of({2})}), StructuralError);
  std::vector<AtomSet> sets{of({0}), of({1}), of({0})};
  auto H = HypothesisClass::deduplicated(3, sets);
  EXPECT_EQ(H.size(), 2u);
  EXPECT_EQ(H.find(of({1})), 1u);
  EXPECT_EQ(H.find(of({2})), 2u);
}

TEST(Hypothesis, BitsRoundTrip) {
  std::vector<int> bits{0, 1, 1, 0};
  auto h = Hypothesis::from_bits(bits);
  EXPECT_EQ(h.positive(), of({1, 2}));
  EXPECT_EQ(h.to_bits(), bits);
  std::vector<int> bad{0, 2};
  EXPECT_THROW(Hypothesis::from_bits(bad), InputError);
}

TEST(Distribution, Validation) {
  EXPECT_THROW(Distribution({0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(Distribution({-0.1, 1.1}), InvalidArgument);
  EXPECT_NO_THROW(Distribution({0.5, 0.5 + 5e-13}));
  EXPECT_EQ(Distribution({0.0, 1.0, 0.0}).support(), of({1}));
}

TEST(Risk, TrivialExtremes) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    auto d = gen::random_distribution(rng, 6);
    EXPECT_EQ(risk_mu0(AtomSet{}, d), 0.0);
    EXPECT_EQ(risk_mu1(AtomSet::full(6), d), 0.0);
    EXPECT_NEAR(risk_mu0(AtomSet::full(6), d), 1.0, 1e-12);
    EXPECT_NEAR(risk_mu1(AtomSet{}, d), 1.0, 1e-12);
  }
}

TEST(Risk, ExampleThreeUpperThreshold) {
  const double alpha = 0.2, eps0 = 0.1;
  Distribution d({1 - alpha - eps0 / 2, eps0 / 2, alpha});
  EXPECT_EQ(risk_mu0(of({2}), d), 0.2);
}

TEST(Risk, DimensionMismatchIsStructural) {
  Hypothesis h(3, of({0}));
  EXPECT_THROW(risk_mu0(h, Distribution::uniform(4)), StructuralError);
  EXPECT_THROW(risk_mu1(h, Distribution::uniform(2)), StructuralError);
}

TEST(Risk, ComplementIdentityExactOnDyadicMasses) {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = gen::uniform_int(rng, 1, 12);
    auto d = gen::random_dyadic(rng, m);
    AtomSet h = gen::random_set(rng, m, 0.5);
    EXPECT_EQ(risk_mu0(h, d) + risk_mu1(h, d), 1.0);
  }
}

TEST(Risk, ComplementIdentityWithinToleranceOnArbitraryMasses) {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = gen::uniform_int(rng, 1, 12);
    auto d = gen::random_distribution(rng, m);
    AtomSet h = gen::random_set(rng, m, 0.5);
    EXPECT_NEAR(risk_mu0(h, d) + risk_mu1(h, d), 1.0, 1e-12);
  }
}

TEST(ConstrainedSubclass, Examples) {
  std::vector<AtomSet> singles;
  for (std::size_t i = 0; i < 4; ++i) singles.push_back(AtomSet::single(i));
  HypothesisClass H(4, singles);
  EXPECT_EQ(constrained_subclass(H, Distribution::uniform(4), 1.0).size(), 4u);
  EXPECT_TRUE(constrained_subclass(H, Distribution::uniform(4), 0.0).empty());

  HypothesisClass chain(3, {of({0, 1, 2}), of({1, 2}), of({2})});
  Distribution mu0({0.75, 0.05, 0.2});
  EXPECT_EQ(constrained_subclass(chain, mu0, 0.2), (std::vector<std::size_t>{2}));
}

TEST(ConstrainedSubclass, MonotoneInLevelAndOrderPreserving) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = gen::uniform_int(rng, 1, 10);
    auto H = gen::random_class(rng, m, 40);
    auto d = gen::random_distribution(rng, m);
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    auto lo = constrained_subclass(H, d, a);
    auto hi = constrained_subclass(H, d, b);
    EXPECT_TRUE(std::is_sorted(lo.begin(), lo.end()));
    EXPECT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
  }
}

TEST(EmpiricalDistribution, Examples) {
  Sample a{{0, 0, 0, 0}, 0};
  EXPECT_EQ(empirical_distribution(a, 2).mass(), (std::vector<double>{1.0, 0.0}));
  Sample b{{0, 1, 1, 1}, 0};
  EXPECT_EQ(empirical_distribution(b, 2).mass(), (std::vector<double>{0.25, 0.75}));
  EXPECT_THROW(empirical_distribution(Sample{}, 2), InvalidArgument);
  Sample bad{{0, 3}, 0};
  EXPECT_THROW(empirical_distribution(bad, 2), StructuralError);
}

TEST(EmpiricalDistribution, RiskMatchesDirectCount) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = gen::uniform_int(rng, 1, 9);
    auto d = gen::random_distribution(rng, m);
    auto s = draw_sample(d, gen::uniform_int(rng, 1, 300), rng.next());
    auto emp = empirical_distribution(s, m);
    AtomSet h = gen::random_set(rng, m, 0.5);
    EXPECT_NEAR(risk_mu1(h, emp), counted_miss_rate(h, s), 1e-12);
  }
}

TEST(EmpiricalDistribution, PointMassSampleIsThePointMass) {
  auto d = Distribution::point_mass(5, 3);
  auto s = draw_sample(d, 77, 9);
  EXPECT_EQ(empirical_distribution(s, 5), d);
}

TEST(ExcessRisk, MinimizerScoresZeroAndClampHolds) {
  HypothesisClass H(3, {of({}), of({1}), of({2}), of({1, 2})});
  Distribution mu0({0.5, 0.25, 0.25});
  Distribution mu1({0.0, 0.625, 0.375});
  EXPECT_EQ(excess_risk(of({1}), H, mu0, mu1, 0.25), 0.0);
  // {x1, x2} is infeasible and beats the constrained optimum; clamped to 0.
  EXPECT_EQ(excess_risk(of({1, 2}), H, mu0, mu1, 0.25), 0.0);
  EXPECT_EQ(excess_risk(of({2}), H, mu0, mu1, 0.25), 0.625 - 0.375);
  HypothesisClass no_empty(3, {of({1}), of({2})});
  EXPECT_THROW(excess_risk(of({1}), no_empty, mu0, mu1, 0.1), DomainError);
}

TEST(ExcessRisk, MatchesEnumerationOnThreeAtoms) {
  Rng rng(8);
  std::vector<AtomSet> all;
  for (std::uint64_t b = 0; b < 8; ++b) all.emplace_back(b);
  for (int t = 0; t < 300; ++t) {
    auto H = gen::random_class(rng, 3, 8);
    auto mu0 = gen::random_distribution(rng, 3);
    auto mu1 = gen::random_distribution(rng, 3);
    const double alpha = rng.uniform();
    double best = 2.0;
    for (auto h : H.sets()) {
      const double r0 = mu0[0] * h.contains(0) + mu0[1] * h.contains(1) + mu0[2] * h.contains(2);
      const double r1 = mu1[0] * !h.contains(0) + mu1[1] * !h.contains(1) + mu1[2] * !h.contains(2);
      if (r0 <= alpha) best = std::min(best, r1);
    }
    for (auto h : all) {
      if (best > 1.5) {
        EXPECT_THROW(excess_risk(h, H, mu0, mu1, alpha), DomainError);
        continue;
      }
      const double r1 = mu1[0] * !h.contains(0) + mu1[1] * !h.contains(1) + mu1[2] * !h.contains(2);
      EXPECT_NEAR(excess_risk(h, H, mu0, mu1, alpha), std::max(0.0, r1 - best), 1e-12);
      EXPECT_GE(excess_risk(h, H, mu0, mu1, alpha), 0.0);
    }
  }
}

TEST(DrawSample, PointMassAndDeterminism) {
  auto s = draw_sample(Distribution::point_mass(4, 2), 5, 123);
  EXPECT_EQ(s.draws, (std::vector<std::size_t>{2, 2, 2, 2, 2}));
  EXPECT_EQ(s.seed, 123u);
  auto d = Distribution({0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(draw_sample(d, 1000, 42).draws, draw_sample(d, 1000, 42).draws);
  EXPECT_NE(draw_sample(d, 1000, 42).draws, draw_sample(d, 1000, 43).draws);
  EXPECT_THROW(draw_sample(d, 0, 1), InvalidArgument);
}

TEST(DrawSample, NeverDrawsZeroMassAtoms) {
  Distribution d({0.0, 0.5, 0.0, 0.5, 0.0});
  auto s = draw_sample(d, 20000, 77);
  for (auto x : s.draws) EXPECT_TRUE(x == 1 || x == 3);
}

TEST(DrawSample, UniformFrequenciesAtFixedSeed) {
  auto s = draw_sample(Distribution::uniform(4), 100000, 2024);
  auto f = empirical_distribution(s, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(f[i], 0.25, 0.01);
}

TEST(Rng, BelowStaysInRangeAndUniformIsHalfOpen) {
  Rng rng(1);
  for (int t = 0; t < 10000; ++t) {
    EXPECT_LT(rng.below(7), 7u);
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(0, 1));
}
