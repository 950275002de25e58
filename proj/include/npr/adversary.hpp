#pragma once

// Lower-bound instances: the sign-vector packing family, the 1/n-mass family
// for classes without a maximal element, and the mass transport that turns an
// approximate-learner instance into an exact-learner one.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "npr/space.hpp"

namespace npr {

using SignVector = std::vector<int>;

std::size_t hamming_distance(const SignVector& a, const SignVector& b);

/// Greedy code over {-1,+1}^d in a seeded order, all-ones first. Exhaustive for
/// d <= 20; above that, random candidates are scanned up to a fixed budget.
/// Stops early once max_size codewords are kept (0 = no cap). Throws DomainError
/// if fewer than min_size codewords are found.
std::vector<SignVector> gilbert_varshamov_packing(std::size_t d, std::size_t min_dist,
                                                  std::size_t min_size, std::uint64_t seed,
                                                  std::size_t max_size = 0);

struct PackingFamily {
  FiniteSpace space;
  Distribution mu0;
  std::vector<Distribution> mu1_variants;
  std::vector<SignVector> sigma_codes;
  double delta_gap = 0.0;  // Delta
  double alpha = 0.0;      // the level at which the family is feasible, as computed
  std::size_t vc_dimension = 0;
  std::size_t d = 0;  // number of paired atoms (2 in the three-point case)
  std::size_t n = 0;
  bool three_point = false;

  /// Every hypothesis vanishing at x0. Built on demand; d <= 20 only.
  HypothesisClass companion() const;
  std::size_t companion_vc() const { return three_point ? 2 : d; }
  /// Positive set of the mu1-optimal feasible hypothesis for a code.
  AtomSet optimal_set(const SignVector& sigma) const;
};

/// Three-point construction when d_H < 17, paired atoms otherwise.
/// Codes in the paired case have length d/2 and minimum distance ceil(d/8).
PackingFamily build_packing_family(std::size_t d_H, double alpha, std::size_t n, double c1 = 0.5,
                                   std::uint64_t seed = 0, std::size_t max_codes = 16);

/// Learner queried on the all-x0 sample.
using Probe = std::function<std::size_t(const Sample&)>;

struct NoMaxFamily {
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t h0 = 0;
  std::size_t x0 = 0;
  std::size_t probe_choice = 0;  // index of h-hat_0
  std::size_t h1 = 0;
  std::size_t x1 = 0;
  /// Every atom usable as the 1/n escape point, ascending; x1 is among them.
  std::vector<std::size_t> escape_atoms;
  bool strict_cover = true;  // h1 strictly contains A0 and h-hat_0
  std::size_t atom_count = 0;

  /// (1 - 1/n) at x0, 1/n at the escape atom.
  Distribution variant(std::size_t escape) const;
  Distribution variant() const { return variant(x1); }
  std::vector<Distribution> all_variants() const;
};

/// Requires H_alpha(mu0) nonempty without a maximal element (DomainError otherwise).
NoMaxFamily build_nomax_family(const HypothesisClass& H, const Distribution& mu0, double alpha,
                               std::size_t n, const Probe& probe);
/// Learner-independent variant: the probe is replaced by h0 itself.
NoMaxFamily build_nomax_family_fixed(const HypothesisClass& H, const Distribution& mu0,
                                     double alpha, std::size_t n);

struct TransportResult {
  Distribution mu0_prime;
  bool unchanged = false;
  bool case_one = false;  // target lies in every member of H_{a+2e} \ H_{a+e}
  std::size_t target = 0;
  double moved = 0.0;
  std::vector<std::size_t> feasible;  // H_{alpha+epsilon0}(mu0), class order
};

/// Moves at most epsilon0 of mu0-mass so that H_alpha(mu0') = H_{alpha+eps0}(mu0') =
/// H_{alpha+eps0}(mu0), which has no maximal element. Applies when the traces of H on
/// supp(mu0) do not separate three points; DomainError otherwise. Every return is
/// re-verified; a failed check throws VerificationError.
TransportResult transport_measure(const HypothesisClass& H, const Distribution& mu0, double alpha,
                                  double epsilon0);

/// The three identities checked before transport_measure returns.
bool transport_identities_hold(const HypothesisClass& H, const Distribution& mu0,
                               const Distribution& mu0_prime, double alpha, double epsilon0);

}  // namespace npr
