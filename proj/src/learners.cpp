#include "npr/learners.hpp"

#include <cmath>
#include <limits>

#include "npr/structure.hpp"

namespace npr {

LearnerKind parse_learner_kind(const std::string& s) {
  if (s == "erm" || s == "alg1" || s == "algorithm1") return LearnerKind::erm;
  if (s == "maximal-first" || s == "alg2" || s == "algorithm2") return LearnerKind::maximal_first;
  if (s == "constant") return LearnerKind::constant;
  throw InvalidArgument("unknown learner '" + s + "'");
}

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::erm: return "erm";
    case LearnerKind::maximal_first: return "maximal-first";
    case LearnerKind::constant: return "constant";
  }
  return "?";
}

void LearnerConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (mu0_known) {
    if (epsilon0 != 0.0 || delta0 != 0.0) {
      throw InvalidArgument("epsilon0 and delta0 must be 0 when mu0 is known");
    }
    return;
  }
  if (!(epsilon0 > 0.0)) throw InvalidArgument("epsilon0 must be positive when mu0 is unknown");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw InvalidArgument("delta0 must lie in (0, 1)");
  if (!(alpha + epsilon0 < 0.5)) throw InvalidArgument("alpha + epsilon0 must be below 1/2");
}

double epsilon_n(std::size_t d_H, std::size_t n, double delta) {
  if (n == 0) throw InvalidArgument("epsilon_n needs n >= 1");
  const double nn = static_cast<double>(n);
  return (static_cast<double>(d_H) * std::log(2.0 * nn) + std::log(8.0 / delta)) / nn;
}

std::size_t required_n0(std::size_t d_H, double epsilon0, double delta0) {
  if (!(epsilon0 > 0.0)) throw InvalidArgument("required_n0 needs epsilon0 > 0");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw InvalidArgument("required_n0 needs delta0 in (0, 1)");
  auto ok = [&](std::size_t n) {
    const double e = epsilon_n(d_H, n, delta0);
    return std::sqrt(e) + e <= epsilon0;
  };
  if (ok(1)) return 1;
  std::size_t hi = 2;
  while (!ok(hi)) {
    if (hi > (std::size_t{1} << 60)) throw InvalidArgument("required_n0 overflow");
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // fails
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<std::size_t> empirical_constraint_set(const HypothesisClass& H,
                                                  std::span<const std::size_t> counts0,
                                                  double level) {
  if (counts0.size() != H.atom_count()) throw StructuralError("mu0 counts do not match the space");
  std::size_t n0 = 0;
  for (auto c : counts0) n0 += c;
  if (n0 == 0) throw InvalidArgument("empty mu0 sample");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < H.size(); ++i) {
    std::size_t hits = 0;
    for (std::uint64_t b = H[i].bits(); b != 0; b &= b - 1) hits += counts0[std::countr_zero(b)];
    if (static_cast<double>(hits) / static_cast<double>(n0) <= level) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> constraint_set(const HypothesisClass& H, const Mu0Input& mu0,
                                        const LearnerConfig& cfg) {
  cfg.validate();
  if (cfg.mu0_known) {
    const auto* d = std::get_if<Distribution>(&mu0);
    if (!d) throw InvalidArgument("mu0 is declared known but a sample was supplied");
    return constrained_subclass(H, *d, cfg.alpha);
  }
  const auto* s = std::get_if<Sample>(&mu0);
  if (!s) throw InvalidArgument("mu0 is declared unknown but a distribution was supplied");
  const auto counts = s->counts(H.atom_count());
  return empirical_constraint_set(H, counts, cfg.constraint_level());
}

std::size_t erm_choice(const HypothesisClass& H, std::span<const std::size_t> constraint,
                       std::span<const std::size_t> counts1) {
  std::size_t best = constraint.size();
  std::size_t best_hits = 0;
  for (std::size_t k = 0; k < constraint.size(); ++k) {
    std::size_t hits = 0;
    for (std::uint64_t b = H[constraint[k]].bits(); b != 0; b &= b - 1) {
      hits += counts1[std::countr_zero(b)];
    }
    if (best == constraint.size() || hits > best_hits) {
      best = k;
      best_hits = hits;
    }
  }
  return best;
}

LearnerOutput choose(LearnerKind kind, const HypothesisClass& H, std::vector<std::size_t> constraint,
                     std::span<const std::size_t> counts1, double eps_n, std::size_t constant_index) {
  if (counts1.size() != H.atom_count()) throw StructuralError("S1 counts do not match the space");
  LearnerOutput out;
  out.epsilon_n = eps_n;
  out.constraint_set_size = constraint.size();
  if (kind == LearnerKind::constant) {
    if (constant_index >= H.size()) throw InvalidArgument("constant learner index out of range");
    out.chosen = constant_index;
    out.constraint_set = std::move(constraint);
    return out;
  }
  if (constraint.empty()) throw DomainError("infeasible level: the constraint set is empty");
  if (kind == LearnerKind::maximal_first) {
    if (auto top = maximal_element(H, constraint)) {
      out.chosen = *top;
      out.used_maximal_element = true;
      out.constraint_set = std::move(constraint);
      return out;
    }
  }
  out.chosen = constraint[erm_choice(H, constraint, counts1)];
  out.constraint_set = std::move(constraint);
  return out;
}

namespace {

LearnerOutput run_algorithm(LearnerKind kind, const HypothesisClass& H, const Mu0Input& mu0,
                            const Sample& S1, const LearnerConfig& cfg,
                            std::optional<std::size_t> d_H) {
  if (S1.draws.empty()) throw InvalidArgument("S1 must be nonempty");
  auto constraint = constraint_set(H, mu0, cfg);
  const std::size_t d = d_H ? *d_H : vc_dimension(H);
  const auto counts1 = S1.counts(H.atom_count());
  return choose(kind, H, std::move(constraint), counts1, epsilon_n(d, S1.draws.size(), cfg.delta));
}

}  // namespace

LearnerOutput algorithm1(const HypothesisClass& H, const Mu0Input& mu0, const Sample& S1,
                         const LearnerConfig& cfg, std::optional<std::size_t> d_H) {
  return run_algorithm(LearnerKind::erm, H, mu0, S1, cfg, d_H);
}

LearnerOutput algorithm2(const HypothesisClass& H, const Mu0Input& mu0, const Sample& S1,
                         const LearnerConfig& cfg, std::optional<std::size_t> d_H) {
  return run_algorithm(LearnerKind::maximal_first, H, mu0, S1, cfg, d_H);
}

TrialRunner::TrialRunner(const HypothesisClass& H, const Distribution& mu0, const Distribution& mu1,
                         const LearnerConfig& cfg, LearnerKind kind, std::size_t d_H, std::size_t n,
                         std::size_t constant_index)
    : H_(H),
      cfg_(cfg),
      kind_(kind),
      n_(n),
      constant_index_(constant_index),
      eps_n_(0.0),
      best_(std::numeric_limits<double>::infinity()),
      sampler0_(mu0),
      sampler1_(mu1) {
  cfg_.validate();
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  if (mu0.size() != H.atom_count() || mu1.size() != H.atom_count()) {
    throw StructuralError("distributions do not match the class's space");
  }
  eps_n_ = epsilon_n(d_H, n, cfg_.delta);
  if (!cfg_.mu0_known) n0_ = required_n0(d_H, cfg_.epsilon0 / 2, cfg_.delta0);

  known_constraint_ = constrained_subclass(H, mu0, cfg_.alpha);
  if (known_constraint_.empty()) throw DomainError("no feasible hypothesis at level alpha");
  risk1_.resize(H.size());
  truly_feasible_.resize(H.size());
  const double level = cfg_.alpha + cfg_.epsilon0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    risk1_[i] = risk_mu1(H[i], mu1);
    truly_feasible_[i] = risk_mu0(H[i], mu0) <= level;
  }
  for (auto i : known_constraint_) best_ = std::min(best_, risk1_[i]);
}

TrialResult TrialRunner::run(std::uint64_t seed) const {
  std::vector<std::size_t> constraint;
  if (cfg_.mu0_known) {
    constraint = known_constraint_;
  } else {
    Rng r0(derive_seed(seed, 0));
    std::vector<std::size_t> counts0(H_.atom_count(), 0);
    sampler0_.draw_counts(r0, n0_, counts0);
    constraint = empirical_constraint_set(H_, counts0, cfg_.constraint_level());
  }
  Rng r1(derive_seed(seed, 1));
  std::vector<std::size_t> counts1(H_.atom_count(), 0);
  sampler1_.draw_counts(r1, n_, counts1);

  TrialResult r;
  r.output = choose(kind_, H_, std::move(constraint), counts1, eps_n_, constant_index_);
  r.excess = std::max(0.0, risk1_[r.output.chosen] - best_);
  r.feasible = truly_feasible_[r.output.chosen] != 0;
  r.score = r.feasible ? r.excess : 0.0;
  return r;
}

TrialResult run_learner_trial(LearnerKind kind, const HypothesisClass& H, const Distribution& mu0,
                              const Distribution& mu1, const LearnerConfig& cfg, std::size_t d_H,
                              std::size_t n, std::uint64_t seed) {
  return TrialRunner(H, mu0, mu1, cfg, kind, d_H, n).run(seed);
}

}  // namespace npr
