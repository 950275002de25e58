#pragma once

// Constrained ERM, the maximal-element-first learner, the
// sampling-requirement rule, and the seeded trial contract used by the
// experiments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "npr/sampling.hpp"
#include "npr/space.hpp"

namespace npr {

enum class LearnerKind { erm, maximal_first, constant };

/// "erm" / "alg1", "maximal-first" / "alg2", "constant".
LearnerKind parse_learner_kind(const std::string& s);
std::string to_string(LearnerKind k);

struct LearnerConfig {
  double alpha = 0.0;
  double epsilon0 = 0.0;
  double delta0 = 0.0;
  double delta = 0.05;
  bool mu0_known = true;

  /// Throws InvalidArgument when the fields are inconsistent.
  void validate() const;
  /// Level defining the constraint set: alpha, or alpha + epsilon0/2 on the empirical measure.
  double constraint_level() const { return mu0_known ? alpha : alpha + epsilon0 / 2; }
};

struct LearnerOutput {
  std::size_t chosen = 0;  // index into H
  std::size_t constraint_set_size = 0;
  bool used_maximal_element = false;
  double epsilon_n = 0.0;
  std::vector<std::size_t> constraint_set;  // indices into H, class order
};

/// (d log 2n + log(8/delta)) / n.
double epsilon_n(std::size_t d_H, std::size_t n, double delta);

/// Smallest n with sqrt(eps_n) + eps_n <= epsilon0, eps_n taken at delta0.
std::size_t required_n0(std::size_t d_H, double epsilon0, double delta0);

/// The true mu0 (known case) or a sample from it (unknown case).
using Mu0Input = std::variant<Distribution, Sample>;

/// H-tilde per the configuration. May be empty.
std::vector<std::size_t> constraint_set(const HypothesisClass& H, const Mu0Input& mu0,
                                        const LearnerConfig& cfg);

/// {h : #(draws in h) / n0 <= level}, from per-atom counts of a mu0 sample.
std::vector<std::size_t> empirical_constraint_set(const HypothesisClass& H,
                                                  std::span<const std::size_t> counts0,
                                                  double level);

/// Index in `constraint` (class order) maximising the number of S1 draws covered; first wins ties.
std::size_t erm_choice(const HypothesisClass& H, std::span<const std::size_t> constraint,
                       std::span<const std::size_t> counts1);

/// Core of both algorithms on precomputed H-tilde and S1 counts. Throws DomainError when
/// the constraint set is empty.
LearnerOutput choose(LearnerKind kind, const HypothesisClass& H, std::vector<std::size_t> constraint,
                     std::span<const std::size_t> counts1, double eps_n, std::size_t constant_index = 0);

LearnerOutput algorithm1(const HypothesisClass& H, const Mu0Input& mu0, const Sample& S1,
                         const LearnerConfig& cfg, std::optional<std::size_t> d_H = std::nullopt);
LearnerOutput algorithm2(const HypothesisClass& H, const Mu0Input& mu0, const Sample& S1,
                         const LearnerConfig& cfg, std::optional<std::size_t> d_H = std::nullopt);

struct TrialResult {
  LearnerOutput output;
  double excess = 0.0;
  bool feasible = false;  // chosen is in H_{alpha+epsilon0}(mu0)
  double score = 0.0;     // excess * 1{feasible}
};

/// Precomputes everything shared by the trials of one (instance, cfg, n) cell.
/// S0 is drawn from derive_seed(seed, 0) and S1 from derive_seed(seed, 1).
class TrialRunner {
 public:
  TrialRunner(const HypothesisClass& H, const Distribution& mu0, const Distribution& mu1,
              const LearnerConfig& cfg, LearnerKind kind, std::size_t d_H, std::size_t n,
              std::size_t constant_index = 0);

  TrialResult run(std::uint64_t seed) const;

  std::size_t n() const { return n_; }
  /// Size of the mu0 sample; 0 when mu0 is known.
  std::size_t n0() const { return n0_; }
  double eps_n() const { return eps_n_; }
  /// min over H_alpha(mu0) of R_mu1.
  double reference_risk() const { return best_; }

 private:
  const HypothesisClass& H_;
  LearnerConfig cfg_;
  LearnerKind kind_;
  std::size_t n_;
  std::size_t n0_ = 0;
  std::size_t constant_index_;
  double eps_n_;
  double best_;
  Sampler sampler0_;
  Sampler sampler1_;
  std::vector<std::size_t> known_constraint_;
  std::vector<char> truly_feasible_;
  std::vector<double> risk1_;
};

TrialResult run_learner_trial(LearnerKind kind, const HypothesisClass& H, const Distribution& mu0,
                              const Distribution& mu1, const LearnerConfig& cfg, std::size_t d_H,
                              std::size_t n, std::uint64_t seed);

}  // namespace npr
