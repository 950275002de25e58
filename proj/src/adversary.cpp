#include "npr/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "npr/sampling.hpp"
#include "npr/structure.hpp"

namespace npr {

std::size_t hamming_distance(const SignVector& a, const SignVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("sign vectors differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

namespace {

SignVector to_signs(std::uint64_t mask, std::size_t d) {
  SignVector s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = ((mask >> i) & 1U) ? 1 : -1;
  return s;
}

}  // namespace

std::vector<SignVector> gilbert_varshamov_packing(std::size_t d, std::size_t min_dist,
                                                  std::size_t min_size, std::uint64_t seed,
                                                  std::size_t max_size) {
  if (d == 0 || d > 64) throw InvalidArgument("packing length must lie in 1..64");
  if (min_dist == 0 || min_dist > d) throw InvalidArgument("minimum distance must lie in 1..d");
  const std::uint64_t all = AtomSet::full(d).bits();
  std::vector<std::uint64_t> kept{all};
  auto full = [&] { return max_size != 0 && kept.size() >= max_size; };
  auto offer = [&](std::uint64_t c) {
    for (auto k : kept) {
      if (static_cast<std::size_t>(std::popcount(k ^ c)) < min_dist) return;
    }
    kept.push_back(c);
  };

  Rng rng(seed);
  if (d <= 20) {
    std::vector<std::uint64_t> order(all);  // every mask except all-ones
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (auto c : order) {
      if (full()) break;
      offer(c);
    }
  } else {
    constexpr std::size_t kCandidates = std::size_t{1} << 20;
    for (std::size_t t = 0; t < kCandidates && !full(); ++t) offer(rng.next() & all);
  }
  if (kept.size() < min_size) {
    throw DomainError("packing of size " + std::to_string(min_size) + " at distance " +
                      std::to_string(min_dist) + " not found for d = " + std::to_string(d));
  }
  std::vector<SignVector> out;
  out.reserve(kept.size());
  for (auto k : kept) out.push_back(to_signs(k, d));
  return out;
}

HypothesisClass PackingFamily::companion() const {
  if (d > 20) throw InvalidArgument("companion class is only built for d <= 20");
  std::vector<AtomSet> sets;
  sets.reserve(std::size_t{1} << d);
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b) sets.emplace_back(b << 1);
  return HypothesisClass(d + 1, std::move(sets));
}

AtomSet PackingFamily::optimal_set(const SignVector& sigma) const {
  const std::size_t half = d / 2;
  if (sigma.size() != half) throw InvalidArgument("code length does not match the family");
  AtomSet s;
  for (std::size_t i = 0; i < half; ++i) s.insert(sigma[i] > 0 ? 1 + i : 1 + half + i);
  return s;
}

PackingFamily build_packing_family(std::size_t d_H, double alpha, std::size_t n, double c1,
                                   std::uint64_t seed, std::size_t max_codes) {
  if (d_H < 2) throw InvalidArgument("packing needs d_H >= 2");
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidArgument("alpha must lie in (0, 1/2)");
  if (!(c1 > 0.0 && c1 < 1.0)) throw InvalidArgument("c1 must lie in (0, 1)");
  if (n == 0) throw InvalidArgument("n must be at least 1");

  PackingFamily f{FiniteSpace(3), Distribution::uniform(3), {}, {}, 0.0, alpha, d_H, 2, n, true};
  if (d_H < 17) {
    const double delta = c1 / std::sqrt(static_cast<double>(n));
    f.space = FiniteSpace({"x0", "x1", "x2"});
    f.mu0 = Distribution({1.0 - 2.0 * alpha, alpha, alpha});
    const double hi = 0.5 + delta / 2;
    const double lo = 1.0 - hi;
    f.mu1_variants = {Distribution({0.0, hi, lo}), Distribution({0.0, lo, hi})};
    f.sigma_codes = {{1}, {-1}};
    f.delta_gap = delta;
    return f;
  }

  const std::size_t d = (d_H % 2 == 1) ? d_H - 1 : d_H - 2;
  if (d + 1 > kMaxAtoms) throw InvalidArgument("d_H too large for the atom capacity");
  const double delta = c1 * std::sqrt(static_cast<double>(d_H) / static_cast<double>(n));
  if (delta > 1.0) throw InvalidArgument("gap Delta exceeds 1; increase n");
  const std::size_t half = d / 2;

  std::vector<std::string> labels{"x0"};
  for (std::size_t i = 1; i <= half; ++i) labels.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= half; ++i) labels.push_back("x" + std::to_string(i) + "'");
  f.space = FiniteSpace(labels);
  f.three_point = false;
  f.d = d;

  const double q = 2.0 * alpha / static_cast<double>(d);
  std::vector<double> m0(d + 1, q);
  m0[0] = 1.0 - 2.0 * alpha;
  f.mu0 = Distribution(m0);
  double level = 0.0;
  for (std::size_t i = 0; i < half; ++i) level += q;
  f.alpha = level;

  const std::size_t min_dist = (d + 7) / 8;
  const std::size_t min_size = std::max<std::size_t>(2, std::size_t{1} << (d / 16));
  f.sigma_codes = gilbert_varshamov_packing(half, min_dist, min_size, seed,
                                            std::max(max_codes, min_size));
  f.delta_gap = delta;
  const double base = 1.0 / static_cast<double>(d);
  for (const auto& sigma : f.sigma_codes) {
    std::vector<double> m1(d + 1, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
      const double shift = (sigma[i] / 2.0) * delta / static_cast<double>(d);
      m1[1 + i] = base + shift;
      m1[1 + half + i] = base - shift;
    }
    f.mu1_variants.emplace_back(std::move(m1));
  }
  return f;
}

Distribution NoMaxFamily::variant(std::size_t escape) const {
  std::vector<double> m(atom_count, 0.0);
  const double tail = 1.0 / static_cast<double>(n);
  m.at(x0) = 1.0 - tail;
  m.at(escape) += tail;
  return Distribution(std::move(m));
}

std::vector<Distribution> NoMaxFamily::all_variants() const {
  std::vector<Distribution> out;
  for (auto x : escape_atoms) out.push_back(variant(x));
  return out;
}

namespace {

NoMaxFamily build_nomax(const HypothesisClass& H, const Distribution& mu0, double alpha,
                        std::size_t n, const Probe* probe) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const auto feasible = constrained_subclass(H, mu0, alpha);
  if (feasible.empty()) throw DomainError("no feasible hypothesis at level alpha");
  if (maximal_element(H, feasible)) {
    throw DomainError("construction inapplicable: H_alpha(mu0) has a maximal element");
  }

  for (std::size_t h0 : feasible) {
    const AtomSet a0 = H[h0];
    for (std::size_t x0 : a0.members()) {
      NoMaxFamily f;
      f.alpha = alpha;
      f.n = n;
      f.h0 = h0;
      f.x0 = x0;
      f.atom_count = H.atom_count();
      if (probe) {
        Sample s{std::vector<std::size_t>(n, f.x0), 0};
        f.probe_choice = (*probe)(s);
        if (f.probe_choice >= H.size()) throw InvalidArgument("probe returned an index outside H");
      } else {
        f.probe_choice = h0;
      }
      const AtomSet guess = H[f.probe_choice];
      const AtomSet cover = a0 | guess;

      AtomSet escapes;
      bool have_h1 = false;
      for (std::size_t h : feasible) {
        if (!cover.is_proper_subset_of(H[h])) continue;
        if (!have_h1) {
          f.h1 = h;
          f.x1 = H[h].minus(cover).first();
          have_h1 = true;
        }
        escapes |= H[h].minus(cover);
      }
      if (!have_h1) {
        // No member strictly covers both; any member holding x0 and a point the
        // guess misses still forces an error of at least 1/n.
        f.strict_cover = false;
        for (std::size_t h : feasible) {
          if (!H[h].contains(f.x0) || H[h].is_subset_of(guess)) continue;
          const AtomSet gap = H[h].minus(guess);
          const AtomSet outside = gap.minus(a0);
          if (!have_h1) {
            f.h1 = h;
            f.x1 = outside.empty() ? gap.first() : outside.first();
            have_h1 = true;
          }
          escapes |= gap;
        }
      }
      if (!have_h1) continue;
      f.escape_atoms = escapes.members();
      return f;
    }
  }
  throw DomainError("construction inapplicable: no admissible (h0, h1) pair");
}

}  // namespace

NoMaxFamily build_nomax_family(const HypothesisClass& H, const Distribution& mu0, double alpha,
                               std::size_t n, const Probe& probe) {
  if (!probe) throw InvalidArgument("probe learner is required");
  return build_nomax(H, mu0, alpha, n, &probe);
}

NoMaxFamily build_nomax_family_fixed(const HypothesisClass& H, const Distribution& mu0,
                                     double alpha, std::size_t n) {
  return build_nomax(H, mu0, alpha, n, nullptr);
}

bool transport_identities_hold(const HypothesisClass& H, const Distribution& mu0,
                               const Distribution& mu0_prime, double alpha, double epsilon0) {
  const auto before = constrained_subclass(H, mu0, alpha + epsilon0);
  const auto at_alpha = constrained_subclass(H, mu0_prime, alpha);
  const auto at_top = constrained_subclass(H, mu0_prime, alpha + epsilon0);
  return !before.empty() && at_alpha == before && at_top == before &&
         !maximal_element(H, before).has_value();
}

namespace {

// The listed members sorted by their trace on the support; DomainError unless
// the traces are nested.
std::vector<std::size_t> nested_traces(const HypothesisClass& H, const std::vector<std::size_t>& idx,
                                       AtomSet support) {
  std::vector<std::size_t> order = idx;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (H[a] & support).size() < (H[b] & support).size();
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(H[order[k - 1]] & support).is_subset_of(H[order[k]] & support)) {
      throw DomainError("construction inapplicable: traces on the support are not nested");
    }
  }
  return order;
}

}  // namespace

TransportResult transport_measure(const HypothesisClass& H, const Distribution& mu0, double alpha,
                                  double epsilon0) {
  if (mu0.size() != H.atom_count()) throw StructuralError("mu0 does not match the class's space");
  if (!(epsilon0 > 0.0)) throw InvalidArgument("epsilon0 must be positive");
  if (!(alpha >= 0.0 && alpha + 2 * epsilon0 < 0.5)) {
    throw DomainError("construction inapplicable: needs alpha + 2 epsilon0 < 1/2");
  }
  const AtomSet support = mu0.support();
  const auto G = constrained_subclass(H, mu0, alpha + epsilon0);
  if (G.empty()) throw DomainError("no feasible hypothesis at level alpha + epsilon0");
  if (maximal_element(H, G)) {
    throw DomainError("construction inapplicable: H_{alpha+epsilon0}(mu0) has a maximal element");
  }
  if (separates_three_points(project(H, support))) {
    throw DomainError("construction inapplicable: traces on supp(mu0) separate three points");
  }

  TransportResult r{mu0, false, false, 0, 0.0, G};
  const auto F = constrained_subclass(H, mu0, alpha);
  if (F == G) {
    r.unchanged = true;
    return r;
  }
  const auto K = constrained_subclass(H, mu0, alpha + 2 * epsilon0);
  const auto g_chain = nested_traces(H, G, support);
  const auto k_chain = nested_traces(H, K, support);
  const AtomSet top = H[g_chain.back()] & support;
  AtomSet base;
  for (auto i : F) base |= H[i] & support;

  std::vector<std::size_t> upper;  // K \ G
  for (auto i : k_chain) {
    if (!std::binary_search(G.begin(), G.end(), i)) upper.push_back(i);
  }
  if (!upper.empty()) {
    r.case_one = true;
    const AtomSet w = (H[upper.front()] & support).minus(top);
    if (w.empty()) throw VerificationError("transport: no common point above the feasible chain");
    r.target = w.first();
  } else {
    const AtomSet z = support.minus(H[k_chain.back()] & support);
    if (z.empty()) throw VerificationError("transport: the chain top covers the support");
    r.target = z.first();
  }

  // Absorb rounding residue so an atom is emptied rather than left with ~1 ulp.
  constexpr double kResidue = 1e-15;
  std::vector<double> mass = mu0.mass();
  double removed = 0.0;
  const auto stratum_region = top.minus(base).members();
  const auto base_region = base.members();
  for (auto j : g_chain) {
    if (std::binary_search(F.begin(), F.end(), j)) continue;
    const double excess = risk_mu0(H[j], mu0) - alpha;
    double deficit = excess - removed;
    if (deficit <= 0.0) continue;
    const AtomSet region = H[j] & support;
    for (const auto* list : {&stratum_region, &base_region}) {
      for (auto a : *list) {
        if (deficit <= 0.0) break;
        if (!region.contains(a) || mass[a] <= 0.0) continue;
        const double take = mass[a] <= deficit + kResidue ? mass[a] : deficit;
        mass[a] -= take;
        deficit -= take;
        removed += take;
      }
    }
  }
  mass[r.target] += removed;
  r.moved = removed;
  if (removed > epsilon0 + kResidue) throw VerificationError("transport moved more than epsilon0");

  Distribution out(std::move(mass));
  if (!transport_identities_hold(H, mu0, out, alpha, epsilon0)) {
    throw VerificationError("transport: postcondition identities failed");
  }
  r.mu0_prime = std::move(out);
  return r;
}

}  // namespace npr
