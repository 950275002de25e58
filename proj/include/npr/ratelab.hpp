#pragma once

// Monte-Carlo rate estimation: per-n mean scores, a log-log slope with a
// bootstrap interval, and the regime verdict. Also the Bayes floor of the
// packing family.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "npr/adversary.hpp"
#include "npr/learners.hpp"
#include "npr/space.hpp"

namespace npr {

enum class Regime { trivial, sqrt, linear, indeterminate };
std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

/// A rate parameter that is either fixed or equal to 1/n.
struct RateParam {
  bool per_n = false;
  double value = 0.0;
  double at(std::size_t n) const { return per_n ? 1.0 / static_cast<double>(n) : value; }
  friend bool operator==(const RateParam&, const RateParam&) = default;
};

struct InstanceSpec {
  enum class Kind { fixture, packing, nomax };
  Kind kind = Kind::fixture;
  std::string fixture;            // fixture and nomax kinds
  std::size_t vc_dimension = 2;   // packing
  double c1 = 0.5;                // packing
  std::size_t max_codes = 16;     // packing, paired-atom case
  bool fixed_escape = false;      // nomax: skip the learner probe
  double transport_epsilon0 = 0;  // nomax: transport mu0 first when positive
  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct ExperimentConfig {
  InstanceSpec instance;
  LearnerKind learner = LearnerKind::erm;
  std::size_t constant_index = 0;
  double alpha = 0.0;
  double epsilon0 = 0.0;
  RateParam delta0{false, 0.0};
  RateParam delta{true, 0.0};
  bool mu0_known = true;
  std::vector<std::size_t> n_grid;
  std::size_t trials_per_n = 2000;
  std::uint64_t master_seed = 0;
  bool adversarial = true;
  std::size_t bootstrap_resamples = 1000;
  std::pair<double, double> sqrt_window{-0.7, -0.3};
  std::pair<double, double> linear_window{-1.3, -0.8};
  std::size_t threads = 0;  // 0 = available parallelism; never affects results

  /// Throws InvalidArgument on a malformed grid or trial count.
  void validate() const;
  LearnerConfig learner_config(std::size_t n) const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// The instance realised at one sample size.
struct Scenario {
  HypothesisClass H;
  Distribution mu0;
  std::vector<Distribution> variants;
  std::size_t vc_dimension = 0;
};

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t n);

struct PerN {
  std::size_t n = 0;
  double mean_score = 0.0;
  double stderr_score = 0.0;
  double feasibility_freq = 0.0;  // minimum over variants
  std::size_t worst_variant = 0;  // variant attaining mean_score
  std::vector<double> variant_means;
  std::size_t n0 = 0;
  double epsilon_n = 0.0;
  friend bool operator==(const PerN&, const PerN&) = default;
};

struct RateReport {
  std::vector<PerN> per_n;
  std::optional<double> slope;
  std::optional<std::pair<double, double>> slope_ci;
  Regime regime = Regime::indeterminate;
  std::size_t fitted_points = 0;
  friend bool operator==(const RateReport&, const RateReport&) = default;
};

struct ExperimentResult {
  RateReport report;
  /// scores[i][v][t]: grid point i, variant v, trial t.
  std::vector<std::vector<std::vector<double>>> scores;
};

ExperimentResult run_experiment_detailed(const ExperimentConfig& cfg);
RateReport run_experiment(const ExperimentConfig& cfg);

/// OLS slope of log(mean) on log(n) over the positive means; nullopt below two points.
std::optional<double> fit_slope(const std::vector<std::size_t>& n, const std::vector<double>& means);

/// Bayes risk against the uniform prior over the family's variants at sample size n.
/// Exact for the three-point family; Monte Carlo with `replicates` draws otherwise.
double minimax_floor(const PackingFamily& family, std::size_t n, std::size_t replicates = 100000,
                     std::uint64_t seed = 0);

}  // namespace npr
