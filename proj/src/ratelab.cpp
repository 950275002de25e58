#include "npr/ratelab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "npr/fixtures.hpp"
#include "npr/sampling.hpp"
#include "npr/structure.hpp"

namespace npr {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::trivial: return "trivial";
    case Regime::sqrt: return "sqrt";
    case Regime::linear: return "linear";
    case Regime::indeterminate: return "indeterminate";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  if (s == "trivial") return Regime::trivial;
  if (s == "sqrt") return Regime::sqrt;
  if (s == "linear") return Regime::linear;
  if (s == "indeterminate") return Regime::indeterminate;
  throw InvalidArgument("unknown regime '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (n_grid.size() < 2) throw InvalidArgument("n_grid needs at least two points");
  if (n_grid.front() == 0) throw InvalidArgument("n_grid entries must be positive");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("n_grid must be strictly increasing");
  }
  if (trials_per_n < 100) throw InvalidArgument("trials_per_n must be at least 100");
  if (!(sqrt_window.first < sqrt_window.second) || !(linear_window.first < linear_window.second)) {
    throw InvalidArgument("slope windows must have lo < hi");
  }
  for (auto n : n_grid) learner_config(n).validate();
}

LearnerConfig ExperimentConfig::learner_config(std::size_t n) const {
  LearnerConfig c;
  c.alpha = alpha;
  c.mu0_known = mu0_known;
  c.delta = delta.at(n);
  c.epsilon0 = mu0_known ? 0.0 : epsilon0;
  c.delta0 = mu0_known ? 0.0 : delta0.at(n);
  return c;
}

namespace {

struct BuiltScenario {
  Scenario scenario;
  double alpha;
};

Fixture fixture_with_distributions(const std::string& name) {
  Fixture f = make_fixture(name);
  if (!f.mu0 || !f.mu1) throw InputError("fixture '" + name + "' carries no distributions");
  return f;
}

BuiltScenario build(const ExperimentConfig& cfg, std::size_t n) {
  using Kind = InstanceSpec::Kind;
  const auto& spec = cfg.instance;
  if (spec.kind == Kind::packing) {
    auto fam = build_packing_family(spec.vc_dimension, cfg.alpha, n, spec.c1, cfg.master_seed,
                                    spec.max_codes);
    std::vector<Distribution> variants = fam.mu1_variants;
    if (!cfg.adversarial) variants.resize(1, variants.front());
    return {{fam.companion(), fam.mu0, std::move(variants), fam.companion_vc()}, fam.alpha};
  }

  Fixture f = fixture_with_distributions(spec.fixture);
  const std::size_t vc = vc_dimension(f.H);
  if (spec.kind == Kind::fixture) {
    return {{f.H, *f.mu0, {*f.mu1}, vc}, cfg.alpha};
  }

  Distribution mu0 = *f.mu0;
  if (spec.transport_epsilon0 > 0.0) {
    mu0 = transport_measure(f.H, mu0, cfg.alpha, spec.transport_epsilon0).mu0_prime;
  }
  NoMaxFamily fam;
  if (spec.fixed_escape) {
    fam = build_nomax_family_fixed(f.H, mu0, cfg.alpha, n);
  } else {
    const LearnerConfig lc = cfg.learner_config(n);
    const HypothesisClass& H = f.H;
    const Probe probe = [&](const Sample& s) {
      std::vector<std::size_t> constraint;
      if (lc.mu0_known) {
        constraint = constrained_subclass(H, mu0, lc.alpha);
      } else {
        const std::size_t n0 = required_n0(vc, lc.epsilon0 / 2, lc.delta0);
        Rng rng(derive_seed(cfg.master_seed, 0x9b0be));
        std::vector<std::size_t> counts0(H.atom_count(), 0);
        Sampler(mu0).draw_counts(rng, n0, counts0);
        constraint = empirical_constraint_set(H, counts0, lc.constraint_level());
      }
      const auto counts1 = s.counts(H.atom_count());
      return choose(cfg.learner, H, std::move(constraint), counts1,
                    epsilon_n(vc, s.draws.size(), lc.delta), cfg.constant_index)
          .chosen;
    };
    fam = build_nomax_family(f.H, mu0, cfg.alpha, n, probe);
  }
  std::vector<Distribution> variants =
      cfg.adversarial ? fam.all_variants() : std::vector<Distribution>{fam.variant()};
  return {{f.H, mu0, std::move(variants), vc}, cfg.alpha};
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Type-7 quantile of sorted data.
double quantile(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t n) { return build(cfg, n).scenario; }

std::optional<double> fit_slope(const std::vector<std::size_t>& n, const std::vector<double>& means) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (means[i] > 0.0) {
      x.push_back(std::log(static_cast<double>(n[i])));
      y.push_back(std::log(means[i]));
    }
  }
  if (x.size() < 2) return std::nullopt;
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ExperimentResult run_experiment_detailed(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  RateReport& report = result.report;
  const std::size_t T = cfg.trials_per_n;
  bool all_zero = true;

  for (std::size_t n : cfg.n_grid) {
    BuiltScenario built = build(cfg, n);
    const Scenario& sc = built.scenario;
    LearnerConfig lc = cfg.learner_config(n);
    lc.alpha = built.alpha;

    PerN row;
    row.n = n;
    row.feasibility_freq = 1.0;
    std::vector<std::vector<double>> per_variant;
    double worst = -1.0;
    for (std::size_t v = 0; v < sc.variants.size(); ++v) {
      const TrialRunner runner(sc.H, sc.mu0, sc.variants[v], lc, cfg.learner, sc.vc_dimension, n,
                               cfg.constant_index);
      row.n0 = runner.n0();
      row.epsilon_n = runner.eps_n();
      const std::uint64_t cell = derive_seed(derive_seed(cfg.master_seed, n), v);
      std::vector<double> scores(T);
      std::vector<char> feasible(T);
      parallel_for(T, cfg.threads, [&](std::size_t t) {
        const TrialResult r = runner.run(derive_seed(cell, t));
        scores[t] = r.score;
        feasible[t] = r.feasible;
      });
      const double m = mean_of(scores);
      double ss = 0.0;
      for (double s : scores) {
        ss += (s - m) * (s - m);
        if (s != 0.0) all_zero = false;
      }
      const double se = std::sqrt(ss / static_cast<double>(T - 1)) / std::sqrt(static_cast<double>(T));
      const auto ok = static_cast<std::size_t>(std::count(feasible.begin(), feasible.end(), 1));
      row.feasibility_freq = std::min(row.feasibility_freq, static_cast<double>(ok) / static_cast<double>(T));
      row.variant_means.push_back(m);
      if (m > worst) {
        worst = m;
        row.mean_score = m;
        row.stderr_score = se;
        row.worst_variant = v;
      }
      per_variant.push_back(std::move(scores));
    }
    report.per_n.push_back(std::move(row));
    result.scores.push_back(std::move(per_variant));
  }

  std::vector<double> means;
  for (const auto& r : report.per_n) means.push_back(r.mean_score);
  for (double m : means) report.fitted_points += m > 0.0;
  if (all_zero) {
    report.regime = Regime::trivial;
    return result;
  }
  report.slope = fit_slope(cfg.n_grid, means);
  if (!report.slope || cfg.bootstrap_resamples == 0) return result;

  Rng boot(derive_seed(cfg.master_seed, 0xb0075742));
  std::vector<double> slopes;
  std::vector<double> resampled(means.size());
  for (std::size_t b = 0; b < cfg.bootstrap_resamples; ++b) {
    for (std::size_t i = 0; i < result.scores.size(); ++i) {
      double best = -1.0;
      for (const auto& scores : result.scores[i]) {
        double s = 0.0;
        for (std::size_t t = 0; t < T; ++t) s += scores[boot.below(T)];
        best = std::max(best, s / static_cast<double>(T));
      }
      resampled[i] = best;
    }
    if (auto s = fit_slope(cfg.n_grid, resampled)) slopes.push_back(*s);
  }
  if (slopes.empty()) return result;
  std::sort(slopes.begin(), slopes.end());
  const std::pair<double, double> ci{quantile(slopes, 0.025), quantile(slopes, 0.975)};
  report.slope_ci = ci;
  auto inside = [&](const std::pair<double, double>& w) {
    return ci.first >= w.first && ci.second <= w.second;
  };
  if (inside(cfg.sqrt_window)) {
    report.regime = Regime::sqrt;
  } else if (inside(cfg.linear_window)) {
    report.regime = Regime::linear;
  }
  return result;
}

RateReport run_experiment(const ExperimentConfig& cfg) { return run_experiment_detailed(cfg).report; }

namespace {

double log_binomial_pmf(std::size_t n, std::size_t c, double p) {
  const double nn = static_cast<double>(n), cc = static_cast<double>(c);
  double v = std::lgamma(nn + 1) - std::lgamma(cc + 1) - std::lgamma(nn - cc + 1);
  if (c > 0) v += cc * std::log(p);
  if (c < n) v += (nn - cc) * std::log1p(-p);
  return v;
}

}  // namespace

double minimax_floor(const PackingFamily& family, std::size_t n, std::size_t replicates,
                     std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (family.three_point) {
    const double hi = family.mu1_variants[0][1];
    const double lo = family.mu1_variants[0][2];
    const double gap = hi - lo;
    if (gap == 0.0) return 0.0;
    double overlap = 0.0;
    for (std::size_t c = 0; c <= n; ++c) {
      const double a = log_binomial_pmf(n, c, hi);
      const double b = log_binomial_pmf(n, c, lo);
      overlap += std::exp(std::min(a, b));
    }
    return gap / 2 * overlap;
  }

  if (replicates < 100000) throw InvalidArgument("Monte Carlo floor needs at least 1e5 replicates");
  const std::size_t M = family.mu1_variants.size();
  const std::size_t m = family.d + 1;
  const std::size_t half = family.d / 2;
  std::vector<Sampler> samplers;
  std::vector<std::vector<double>> logs(M, std::vector<double>(m, 0.0));
  std::vector<double> best_risk(M);
  for (std::size_t k = 0; k < M; ++k) {
    samplers.emplace_back(family.mu1_variants[k]);
    for (std::size_t a = 1; a < m; ++a) logs[k][a] = std::log(family.mu1_variants[k][a]);
    best_risk[k] = risk_mu1(family.optimal_set(family.sigma_codes[k]), family.mu1_variants[k]);
  }
  Rng rng(seed);
  double total = 0.0;
  std::vector<std::size_t> counts(m);
  std::vector<double> w(M), post(m);
  std::vector<std::size_t> order(m - 1);
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto k = static_cast<std::size_t>(rng.below(M));
    std::fill(counts.begin(), counts.end(), 0);
    samplers[k].draw_counts(rng, n, counts);
    double top = -INFINITY;
    for (std::size_t j = 0; j < M; ++j) {
      double s = 0.0;
      for (std::size_t a = 1; a < m; ++a) s += static_cast<double>(counts[a]) * logs[j][a];
      w[j] = s;
      top = std::max(top, s);
    }
    double z = 0.0;
    for (auto& x : w) z += (x = std::exp(x - top));
    std::fill(post.begin(), post.end(), 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      for (std::size_t a = 1; a < m; ++a) post[a] += w[j] / z * family.mu1_variants[j][a];
    }
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return post[a] > post[b]; });
    AtomSet pick;
    for (std::size_t i = 0; i < half; ++i) pick.insert(order[i]);
    total += std::max(0.0, risk_mu1(pick, family.mu1_variants[k]) - best_risk[k]);
  }
  return total / static_cast<double>(replicates);
}

}  // namespace npr
