#include <gtest/gtest.h>

#include <cmath>

#include "npr/adversary.hpp"
#include "npr/fixtures.hpp"
#include "npr/learners.hpp"
#include "npr/structure.hpp"
#include "support/generators.hpp"

using namespace npr;

namespace {

void expect_valid(const Distribution& d) {
  double s = 0.0;
  for (double x : d.mass()) {
    EXPECT_GE(x, 0.0);
    s += x;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
}

void expect_min_distance(const std::vector<SignVector>& codes, std::size_t min_dist) {
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = i + 1; j < codes.size(); ++j)
      EXPECT_GE(hamming_distance(codes[i], codes[j]), min_dist);
}

}  // namespace

TEST(Hamming, Counts) {
  EXPECT_EQ(hamming_distance({1, 1, -1}, {1, -1, 1}), 2u);
  EXPECT_EQ(hamming_distance({1}, {1}), 0u);
}

TEST(GilbertVarshamov, SmallCodes) {
  auto a = gilbert_varshamov_packing(8, 1, 2, 0);
  ASSERT_GE(a.size(), 2u);
  EXPECT_EQ(a.front(), SignVector(8, 1));
  expect_min_distance(a, 1);

  auto b = gilbert_varshamov_packing(16, 2, 4, 5);
  EXPECT_GE(b.size(), 4u);
  EXPECT_EQ(b.front(), SignVector(16, 1));
  expect_min_distance(b, 2);
}

TEST(GilbertVarshamov, SeedsAndCaps) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = gilbert_varshamov_packing(10, 3, 2, seed, 6);
    EXPECT_LE(c.size(), 6u);
    EXPECT_EQ(c.front(), SignVector(10, 1));
    expect_min_distance(c, 3);
  }
  EXPECT_EQ(gilbert_varshamov_packing(12, 4, 2, 9), gilbert_varshamov_packing(12, 4, 2, 9));
  // Only two words of length 3 are at distance 3 from each other.
  EXPECT_THROW(gilbert_varshamov_packing(3, 3, 3, 0), DomainError);
}

TEST(GilbertVarshamov, RandomScanAboveExhaustiveRange) {
  auto c = gilbert_varshamov_packing(32, 4, 8, 1, 8);
  EXPECT_EQ(c.size(), 8u);
  expect_min_distance(c, 4);
}

TEST(Packing, ThreePointValues) {
  auto f = build_packing_family(2, 0.25, 100);
  EXPECT_TRUE(f.three_point);
  EXPECT_EQ(f.mu0.mass(), (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_DOUBLE_EQ(f.delta_gap, 0.05);
  ASSERT_EQ(f.mu1_variants.size(), 2u);
  EXPECT_DOUBLE_EQ(f.mu1_variants[0][1], 0.525);
  EXPECT_DOUBLE_EQ(f.mu1_variants[0][2], 0.475);
  EXPECT_EQ(f.mu1_variants[0][0], 0.0);
  for (const auto& v : f.mu1_variants) expect_valid(v);
  EXPECT_EQ(f.companion().size(), 4u);
  EXPECT_EQ(vc_dimension(f.companion()), 2u);
  EXPECT_TRUE(separates_three_points(f.companion()));
}

TEST(Packing, ThreePointGapIsDelta) {
  for (std::size_t n : {1u, 16u, 100u, 4096u}) {
    auto f = build_packing_family(5, 0.2, n);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& mu1 = f.mu1_variants[k];
      const double own = risk_mu1(f.optimal_set(f.sigma_codes[k]), mu1);
      const double other = risk_mu1(f.optimal_set(f.sigma_codes[1 - k]), mu1);
      EXPECT_NEAR(other - own, f.delta_gap, 1e-15);
    }
  }
}

TEST(Packing, PairedAtomsFeasibleIffAtMostHalf) {
  auto f = build_packing_family(17, 0.2, 400);
  EXPECT_FALSE(f.three_point);
  EXPECT_EQ(f.d, 16u);
  EXPECT_NEAR(f.alpha, 0.2, 1e-15);
  EXPECT_NEAR(f.mu0[1], 0.025, 1e-15);
  EXPECT_NEAR(f.mu0[0], 0.6, 1e-15);
  auto H = f.companion();
  auto feasible = constrained_subclass(H, f.mu0, f.alpha);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const bool small = H[i].size() <= 8;
    expected += small;
    EXPECT_EQ(std::binary_search(feasible.begin(), feasible.end(), i), small);
  }
  EXPECT_EQ(feasible.size(), expected);
}

TEST(Packing, EvenVcDropsTwo) {
  auto f = build_packing_family(18, 0.2, 400);
  EXPECT_EQ(f.d, 16u);
  EXPECT_THROW(build_packing_family(17, 0.2, 1), InvalidArgument);
  EXPECT_THROW(build_packing_family(5, 0.5, 10), InvalidArgument);
  EXPECT_THROW(build_packing_family(5, 0.2, 10, 1.0), InvalidArgument);
}

TEST(Packing, PairedVariantsAndCodeDistance) {
  auto f = build_packing_family(17, 0.2, 400);
  const std::size_t half = f.d / 2;
  EXPECT_GE(f.sigma_codes.size(), 2u);
  expect_min_distance(f.sigma_codes, (f.d + 7) / 8);
  for (std::size_t k = 0; k < f.mu1_variants.size(); ++k) {
    const auto& v = f.mu1_variants[k];
    expect_valid(v);
    EXPECT_EQ(v[0], 0.0);
    for (std::size_t i = 0; i < half; ++i) {
      EXPECT_NEAR(v[1 + i] + v[1 + half + i], 2.0 / f.d, 1e-15);
      EXPECT_NEAR(v[1 + i] - v[1 + half + i], f.sigma_codes[k][i] * f.delta_gap / f.d, 1e-15);
    }
  }
}

TEST(Packing, OptimalSetsAndEighthDeltaGapByEnumeration) {
  auto f = build_packing_family(17, 0.2, 400);
  auto H = f.companion();
  auto feasible = constrained_subclass(H, f.mu0, f.alpha);
  for (std::size_t k = 0; k < f.sigma_codes.size(); ++k) {
    const auto& mu1 = f.mu1_variants[k];
    double best = 2.0;
    for (auto i : feasible) best = std::min(best, risk_mu1(H[i], mu1));
    const double own = risk_mu1(f.optimal_set(f.sigma_codes[k]), mu1);
    EXPECT_NEAR(own, best, 1e-12);
    for (std::size_t j = 0; j < f.sigma_codes.size(); ++j) {
      if (j == k) continue;
      const double gap = risk_mu1(f.optimal_set(f.sigma_codes[j]), mu1) - own;
      const auto ham = hamming_distance(f.sigma_codes[j], f.sigma_codes[k]);
      EXPECT_NEAR(gap, f.delta_gap * ham / f.d, 1e-12);
      EXPECT_GE(gap, f.delta_gap / 8 - 1e-12);
    }
  }
}

TEST(NoMax, ProbeExcessAtLeastOneOverN) {
  auto fx = make_fixture("example3_gap");
  const double alpha = fx.alpha + fx.epsilon0;
  for (std::size_t n : {2u, 10u, 1000u}) {
    Probe erm = [&](const Sample& s) {
      return algorithm1(fx.H, *fx.mu0, s, LearnerConfig{alpha, 0, 0, 0.05, true}, 2).chosen;
    };
    auto fam = build_nomax_family(fx.H, *fx.mu0, alpha, n, erm);
    EXPECT_TRUE(fx.H[fam.h0].contains(fam.x0));
    EXPECT_NE(std::find(fam.escape_atoms.begin(), fam.escape_atoms.end(), fam.x1),
              fam.escape_atoms.end());
    for (const auto& v : fam.all_variants()) {
      expect_valid(v);
      EXPECT_GE(excess_risk(fx.H[fam.probe_choice], fx.H, *fx.mu0, v, alpha), 1.0 / n - 1e-15);
    }
    EXPECT_EQ(fam.variant()[fam.x1], 1.0 / n);
  }
}

// Finite chains always have a top, so instances without one need off-support
// atoms; the transport generator supplies exactly those.
TEST(NoMax, RandomInstancesWithoutTop) {
  Rng rng(77);
  int built = 0, fixed_built = 0;
  for (int t = 0; t < 100000 && built < 150; ++t) {
    auto inst = gen::random_transport_instance(rng);
    if (!inst) continue;
    ++built;
    const double alpha = inst->alpha + inst->epsilon0;
    auto F = constrained_subclass(inst->H, inst->mu0, alpha);
    const std::size_t n = gen::uniform_int(rng, 1, 500);
    const std::size_t pick = F[rng.below(F.size())];
    auto fam = build_nomax_family(inst->H, inst->mu0, alpha, n, [&](const Sample&) { return pick; });
    for (const auto& v : fam.all_variants()) {
      EXPECT_GE(excess_risk(inst->H[pick], inst->H, inst->mu0, v, alpha), 1.0 / n - 1e-15);
    }
    // Without a probe, members with disjoint positive sets leave no escape.
    try {
      auto fixed = build_nomax_family_fixed(inst->H, inst->mu0, alpha, n);
      EXPECT_EQ(fixed.probe_choice, fixed.h0);
      ++fixed_built;
    } catch (const DomainError&) {
    }
  }
  EXPECT_EQ(built, 150);
  EXPECT_GT(fixed_built, 100);
}

TEST(NoMax, NonSeparatingClassesBelowHalfAlwaysHaveATop) {
  Rng rng(78);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = gen::uniform_int(rng, 2, 9);
    auto H = gen::random_nonseparating_class(rng, m, 24);
    auto mu0 = gen::random_distribution(rng, m);
    const double level = 0.49 * rng.uniform();
    auto F = constrained_subclass(H, mu0, level);
    if (F.empty()) continue;
    EXPECT_TRUE(maximal_element(H, F).has_value());
    EXPECT_THROW(build_nomax_family_fixed(H, mu0, level, 10), DomainError);
  }
}

TEST(NoMax, InapplicableWithMaximalElement) {
  auto fx = make_fixture("example3_chain");
  EXPECT_THROW(build_nomax_family_fixed(fx.H, *fx.mu0, fx.alpha, 10), DomainError);
}

TEST(Transport, GapInstanceMovesMassToBottomAtom) {
  auto fx = make_fixture("example3_gap");
  auto r = transport_measure(fx.H, *fx.mu0, fx.alpha, fx.epsilon0);
  EXPECT_FALSE(r.unchanged);
  EXPECT_FALSE(r.case_one);
  EXPECT_EQ(r.target, 0u);
  EXPECT_NEAR(r.moved, 0.05, 1e-15);
  const std::vector<double> expected{0.8, 0, 0, 0, 0.2};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(r.mu0_prime[i], expected[i], 1e-15);
  EXPECT_TRUE(transport_identities_hold(fx.H, *fx.mu0, r.mu0_prime, fx.alpha, fx.epsilon0));
  auto F = constrained_subclass(fx.H, r.mu0_prime, fx.alpha);
  EXPECT_EQ(F, r.feasible);
  EXPECT_FALSE(maximal_element(fx.H, F));
}

TEST(Transport, AlreadyStableMeasureIsUnchanged) {
  auto fx = make_fixture("example3_gap");
  auto r = transport_measure(fx.H, *fx.mu0, 0.25, 0.01);
  EXPECT_TRUE(r.unchanged);
  EXPECT_EQ(r.mu0_prime, *fx.mu0);
  EXPECT_EQ(r.moved, 0.0);
}

TEST(Transport, Preconditions) {
  auto chain = make_fixture("example3_chain");
  EXPECT_THROW(transport_measure(chain.H, *chain.mu0, 0.2, 0.05), DomainError);
  auto gap = make_fixture("example3_gap");
  EXPECT_THROW(transport_measure(gap.H, *gap.mu0, 0.2, 0.15), DomainError);
  EXPECT_THROW(transport_measure(gap.H, *gap.mu0, 0.2, 0.0), InvalidArgument);
  HypothesisClass sep(3, {AtomSet::single(0), AtomSet::single(1)});
  EXPECT_THROW(transport_measure(sep, Distribution({0.1, 0.1, 0.8}), 0.05, 0.1), DomainError);
  EXPECT_THROW(transport_measure(sep, Distribution::uniform(4), 0.05, 0.1), StructuralError);
}

TEST(Transport, RandomEligibleInstances) {
  Rng rng(2718);
  int done = 0, case_one = 0, case_two = 0, unchanged = 0;
  for (int t = 0; t < 100000 && done < 200; ++t) {
    auto inst = gen::random_transport_instance(rng);
    if (!inst) continue;
    ++done;
    auto r = transport_measure(inst->H, inst->mu0, inst->alpha, inst->epsilon0);
    expect_valid(r.mu0_prime);
    EXPECT_LE(r.moved, inst->epsilon0 + 1e-15);
    EXPECT_TRUE(transport_identities_hold(inst->H, inst->mu0, r.mu0_prime, inst->alpha,
                                          inst->epsilon0));
    (r.unchanged ? unchanged : r.case_one ? case_one : case_two)++;
  }
  EXPECT_EQ(done, 200);
  EXPECT_GT(case_one, 0);
  EXPECT_GT(case_two, 0);
}
