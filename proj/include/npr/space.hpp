#pragma once

// Core data model: atoms, hypotheses as positive sets, distributions over
// atoms, samples, and the risk functionals built on them.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "npr/errors.hpp"

namespace npr {

inline constexpr std::size_t kMaxAtoms = 64;

/// Fixed-capacity set of atom indices (at most kMaxAtoms atoms).
class AtomSet {
 public:
  constexpr AtomSet() = default;
  constexpr explicit AtomSet(std::uint64_t bits) : bits_(bits) {}

  /// The set {0, ..., m-1}.
  static constexpr AtomSet full(std::size_t m) {
    return AtomSet(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
  }
  static constexpr AtomSet single(std::size_t i) { return AtomSet(std::uint64_t{1} << i); }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
  constexpr void erase(std::size_t i) { bits_ &= ~(std::uint64_t{1} << i); }

  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  /// Index of the smallest member; undefined on the empty set.
  constexpr std::size_t first() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  constexpr bool is_subset_of(AtomSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool is_proper_subset_of(AtomSet o) const { return is_subset_of(o) && bits_ != o.bits_; }

  constexpr AtomSet operator|(AtomSet o) const { return AtomSet(bits_ | o.bits_); }
  constexpr AtomSet operator&(AtomSet o) const { return AtomSet(bits_ & o.bits_); }
  constexpr AtomSet minus(AtomSet o) const { return AtomSet(bits_ & ~o.bits_); }
  constexpr AtomSet complement(std::size_t m) const { return full(m).minus(*this); }
  constexpr AtomSet& operator|=(AtomSet o) {
    bits_ |= o.bits_;
    return *this;
  }

  friend constexpr bool operator==(AtomSet, AtomSet) = default;
  friend constexpr auto operator<=>(AtomSet a, AtomSet b) { return a.bits_ <=> b.bits_; }

  /// Members in increasing order.
  std::vector<std::size_t> members() const;

 private:
  std::uint64_t bits_ = 0;
};

/// Ordered, labelled atoms 0..m-1.
class FiniteSpace {
 public:
  explicit FiniteSpace(std::size_t m);
  explicit FiniteSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a label; throws InputError if absent.
  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// A classifier h, stored as its positive set {h = 1} over m atoms.
class Hypothesis {
 public:
  Hypothesis(std::size_t atom_count, AtomSet positive);
  /// From a 0/1 vector of length m.
  static Hypothesis from_bits(std::span<const int> bits);

  std::size_t atom_count() const { return atom_count_; }
  AtomSet positive() const { return positive_; }
  bool operator()(std::size_t atom) const { return positive_.contains(atom); }
  std::vector<int> to_bits() const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  std::size_t atom_count_;
  AtomSet positive_;
};

/// Nonempty, duplicate-free, ordered list of hypotheses over a common space.
class HypothesisClass {
 public:
  /// Throws InvalidArgument on duplicates or an empty list.
  HypothesisClass(std::size_t atom_count, std::vector<AtomSet> sets);
  /// Drops later duplicates, keeping first occurrences in order.
  static HypothesisClass deduplicated(std::size_t atom_count, std::span<const AtomSet> sets);

  std::size_t atom_count() const { return atom_count_; }
  std::size_t size() const { return sets_.size(); }
  AtomSet operator[](std::size_t i) const { return sets_[i]; }
  Hypothesis hypothesis(std::size_t i) const { return {atom_count_, sets_.at(i)}; }
  const std::vector<AtomSet>& sets() const { return sets_; }

  /// Index of an identical positive set, or size() if absent.
  std::size_t find(AtomSet s) const;

  friend bool operator==(const HypothesisClass&, const HypothesisClass&) = default;

 private:
  std::size_t atom_count_;
  std::vector<AtomSet> sets_;
};

/// Probability vector over atoms. Entries in [0,1] summing to 1 within 1e-12.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit Distribution(std::vector<double> mass);
  static Distribution point_mass(std::size_t m, std::size_t atom);
  static Distribution uniform(std::size_t m);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  const std::vector<double>& mass() const { return mass_; }
  /// Atoms with strictly positive mass.
  AtomSet support() const;
  /// Left-to-right sum of the masses of the atoms in s.
  double measure(AtomSet s) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> mass_;
};

/// i.i.d. draws (atom indices) together with the seed that generated them.
struct Sample {
  std::vector<std::size_t> draws;
  std::uint64_t seed = 0;

  /// Per-atom occurrence counts over m atoms.
  std::vector<std::size_t> counts(std::size_t m) const;
};

/// R_mu0(h) = P(h = 1).
double risk_mu0(const Hypothesis& h, const Distribution& d);
/// R_mu1(h) = P(h = 0).
double risk_mu1(const Hypothesis& h, const Distribution& d);
double risk_mu0(AtomSet h, const Distribution& d);
double risk_mu1(AtomSet h, const Distribution& d);

/// Indices (in class order) of hypotheses with risk_mu0 <= level, compared exactly.
std::vector<std::size_t> constrained_subclass(const HypothesisClass& H, const Distribution& d,
                                              double level);

/// mass[i] = count(i) / |draws|.
Distribution empirical_distribution(const Sample& s, std::size_t atom_count);

/// max{0, R_mu1(h_hat) - min over H_alpha(mu0) of R_mu1}. Throws DomainError when
/// H_alpha(mu0) is empty.
double excess_risk(AtomSet h_hat, const HypothesisClass& H, const Distribution& mu0,
                   const Distribution& mu1, double alpha);
double excess_risk(const Hypothesis& h_hat, const HypothesisClass& H, const Distribution& mu0,
                   const Distribution& mu1, double alpha);

}  // namespace npr
