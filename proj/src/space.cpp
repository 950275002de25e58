#include "npr/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "npr/sampling.hpp"

namespace npr {

std::vector<std::size_t> AtomSet::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  }
  return out;
}

namespace {

void check_atom_count(std::size_t m) {
  if (m == 0) throw InvalidArgument("a space needs at least one atom");
  if (m > kMaxAtoms) {
    throw InvalidArgument("at most " + std::to_string(kMaxAtoms) + " atoms are supported, got " +
                          std::to_string(m));
  }
}

void check_same_space(std::size_t a, std::size_t b) {
  if (a != b) {
    throw StructuralError("dimension mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b) + " atoms");
  }
}

}  // namespace

FiniteSpace::FiniteSpace(std::size_t m) {
  check_atom_count(m);
  labels_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) labels_.push_back("x" + std::to_string(i));
}

FiniteSpace::FiniteSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  check_atom_count(labels_.size());
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw InvalidArgument("duplicate atom label '" + l + "'");
  }
}

std::size_t FiniteSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InputError("unknown atom label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

Hypothesis::Hypothesis(std::size_t atom_count, AtomSet positive)
    : atom_count_(atom_count), positive_(positive) {
  check_atom_count(atom_count);
  if (!positive.is_subset_of(AtomSet::full(atom_count))) {
    throw StructuralError("positive set exceeds the space's atoms");
  }
}

Hypothesis Hypothesis::from_bits(std::span<const int> bits) {
  AtomSet s;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw InputError("hypothesis bits must be 0 or 1");
    if (bits[i] == 1) s.insert(i);
  }
  return {bits.size(), s};
}

std::vector<int> Hypothesis::to_bits() const {
  std::vector<int> out(atom_count_);
  for (std::size_t i = 0; i < atom_count_; ++i) out[i] = positive_.contains(i) ? 1 : 0;
  return out;
}

HypothesisClass::HypothesisClass(std::size_t atom_count, std::vector<AtomSet> sets)
    : atom_count_(atom_count), sets_(std::move(sets)) {
  check_atom_count(atom_count);
  if (sets_.empty()) throw InvalidArgument("a hypothesis class must be nonempty");
  const AtomSet full = AtomSet::full(atom_count);
  std::unordered_set<std::uint64_t> seen;
  for (AtomSet s : sets_) {
    if (!s.is_subset_of(full)) throw StructuralError("hypothesis exceeds the space's atoms");
    if (!seen.insert(s.bits()).second) throw InvalidArgument("duplicate hypothesis in class");
  }
}

HypothesisClass HypothesisClass::deduplicated(std::size_t atom_count, std::span<const AtomSet> sets) {
  std::vector<AtomSet> kept;
  std::unordered_set<std::uint64_t> seen;
  for (AtomSet s : sets) {
    if (seen.insert(s.bits()).second) kept.push_back(s);
  }
  return {atom_count, std::move(kept)};
}

std::size_t HypothesisClass::find(AtomSet s) const {
  auto it = std::find(sets_.begin(), sets_.end(), s);
  return static_cast<std::size_t>(it - sets_.begin());
}

Distribution::Distribution(std::vector<double> mass) : mass_(std::move(mass)) {
  check_atom_count(mass_.size());
  double total = 0.0;
  for (double p : mass_) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("masses must lie in [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw InvalidArgument("masses must sum to 1 (got " + std::to_string(total) + ")");
  }
}

Distribution Distribution::point_mass(std::size_t m, std::size_t atom) {
  std::vector<double> mass(m, 0.0);
  mass.at(atom) = 1.0;
  return Distribution(std::move(mass));
}

Distribution Distribution::uniform(std::size_t m) {
  return Distribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

AtomSet Distribution::support() const {
  AtomSet s;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (mass_[i] > 0.0) s.insert(i);
  }
  return s;
}

double Distribution::measure(AtomSet s) const {
  double total = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (s.contains(i)) total += mass_[i];
  }
  return total;
}

std::vector<std::size_t> Sample::counts(std::size_t m) const {
  std::vector<std::size_t> c(m, 0);
  for (std::size_t x : draws) {
    if (x >= m) throw StructuralError("sample draw outside the space");
    ++c[x];
  }
  return c;
}

double risk_mu0(AtomSet h, const Distribution& d) { return d.measure(h); }

double risk_mu1(AtomSet h, const Distribution& d) { return d.measure(h.complement(d.size())); }

double risk_mu0(const Hypothesis& h, const Distribution& d) {
  check_same_space(h.atom_count(), d.size());
  return risk_mu0(h.positive(), d);
}

double risk_mu1(const Hypothesis& h, const Distribution& d) {
  check_same_space(h.atom_count(), d.size());
  return risk_mu1(h.positive(), d);
}

std::vector<std::size_t> constrained_subclass(const HypothesisClass& H, const Distribution& d,
                                              double level) {
  check_same_space(H.atom_count(), d.size());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (risk_mu0(H[i], d) <= level) out.push_back(i);
  }
  return out;
}

Distribution empirical_distribution(const Sample& s, std::size_t atom_count) {
  if (s.draws.empty()) throw InvalidArgument("empirical distribution of an empty sample");
  const auto c = s.counts(atom_count);
  const double n = static_cast<double>(s.draws.size());
  std::vector<double> mass(atom_count);
  for (std::size_t i = 0; i < atom_count; ++i) mass[i] = static_cast<double>(c[i]) / n;
  return Distribution(std::move(mass));
}

double excess_risk(AtomSet h_hat, const HypothesisClass& H, const Distribution& mu0,
                   const Distribution& mu1, double alpha) {
  check_same_space(H.atom_count(), mu0.size());
  check_same_space(H.atom_count(), mu1.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (risk_mu0(H[i], mu0) <= alpha) best = std::min(best, risk_mu1(H[i], mu1));
  }
  if (best == std::numeric_limits<double>::infinity()) {
    throw DomainError("no feasible hypothesis at level alpha");
  }
  return std::max(0.0, risk_mu1(h_hat, mu1) - best);
}

double excess_risk(const Hypothesis& h_hat, const HypothesisClass& H, const Distribution& mu0,
                   const Distribution& mu1, double alpha) {
  check_same_space(h_hat.atom_count(), H.atom_count());
  return excess_risk(h_hat.positive(), H, mu0, mu1, alpha);
}

// --- sampling -------------------------------------------------------------

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Sampler::Sampler(const Distribution& d) : cdf_(d.size()) {
  double running = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    running += d[i];
    cdf_[i] = running;
    if (d[i] > 0.0) last_positive_ = i;
  }
}

std::size_t Sampler::draw(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return last_positive_;
  return static_cast<std::size_t>(it - cdf_.begin());
}

void Sampler::draw_counts(Rng& rng, std::size_t n, std::vector<std::size_t>& counts) const {
  for (std::size_t k = 0; k < n; ++k) ++counts[draw(rng)];
}

Sample draw_sample(const Distribution& d, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  Sampler sampler(d);
  Rng rng(seed);
  Sample s;
  s.seed = seed;
  s.draws.resize(n);
  for (auto& x : s.draws) x = sampler.draw(rng);
  return s;
}

}  // namespace npr
