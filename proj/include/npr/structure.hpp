#pragma once

// Exhaustive structural analyzers over finite classes: shattering and VC
// dimension, three-points-separation, total order by inclusion, maximal
// elements, and set-difference classes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "npr/space.hpp"

namespace npr {

/// Two hypotheses and three atoms with h1(x0) = h2(x0) = 0, h1(x1) = h2(x2) = 1,
/// h1(x2) = h2(x1) = 0.
struct SeparationWitness {
  std::size_t h1 = 0;
  std::size_t h2 = 0;
  std::size_t x0 = 0;
  std::size_t x1 = 0;
  std::size_t x2 = 0;
  friend bool operator==(const SeparationWitness&, const SeparationWitness&) = default;
};

struct StructureReport {
  std::size_t vc_dimension = 0;
  bool separates_three_points = false;
  std::optional<SeparationWitness> witness;
};

/// Either a chain (indices sorted by increasing positive set) or the first
/// incomparable pair in lexicographic index order.
struct OrderCertificate {
  bool totally_ordered = false;
  std::vector<std::size_t> chain;
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
};

/// True iff every labelling of `points` is realised by some set.
bool shatters(std::span<const AtomSet> sets, AtomSet points);

/// Default cap on the number of shattering checks performed by vc_dimension.
inline constexpr std::size_t kDefaultVcBudget = std::size_t{1} << 26;

/// Exact VC dimension. Candidate k-sets are grown from shattered (k-1)-sets.
/// Throws ResourceError (with the best lower bound found) past `budget` checks.
std::size_t vc_dimension(std::span<const AtomSet> sets, std::size_t atom_count,
                         std::size_t budget = kDefaultVcBudget);
std::size_t vc_dimension(const HypothesisClass& H, std::size_t budget = kDefaultVcBudget);

/// Lexicographically smallest (h1, h2, x0, x1, x2) witness, if any.
std::optional<SeparationWitness> find_three_point_separation(std::span<const AtomSet> sets,
                                                             std::size_t atom_count);
bool separates_three_points(const HypothesisClass& H);
/// Re-checks the pointwise conditions of a witness.
bool witness_holds(std::span<const AtomSet> sets, const SeparationWitness& w);

StructureReport analyze_structure(const HypothesisClass& H, std::size_t budget = kDefaultVcBudget);

/// Indices refer to positions in `sets`.
OrderCertificate is_totally_ordered(std::span<const AtomSet> sets);
OrderCertificate is_totally_ordered(const HypothesisClass& H);
/// Restricted to the members listed in `subset` (indices into H); the
/// certificate reports indices into H.
OrderCertificate is_totally_ordered(const HypothesisClass& H, std::span<const std::size_t> subset);

/// Position (in `sets`) of the member whose positive set contains all others.
std::optional<std::size_t> maximal_element(std::span<const AtomSet> sets);
std::optional<std::size_t> maximal_element(const HypothesisClass& H);
/// Over a subclass given by indices into H; returns an index into H.
std::optional<std::size_t> maximal_element(const HypothesisClass& H,
                                           std::span<const std::size_t> subset);

/// {B1 \ B2 : B1, B2 in H}, deduplicated, in first-occurrence order over (B1, B2).
HypothesisClass difference_class(const HypothesisClass& H);

/// Traces of H on the atoms in `onto`, deduplicated and re-indexed so that the
/// j-th smallest member of `onto` becomes atom j.
HypothesisClass project(const HypothesisClass& H, AtomSet onto);

/// Positive sets of the listed members.
std::vector<AtomSet> gather(const HypothesisClass& H, std::span<const std::size_t> subset);

}  // namespace npr
