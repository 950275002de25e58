#include "npr/structure.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace npr {

bool shatters(std::span<const AtomSet> sets, AtomSet points) {
  const std::size_t k = points.size();
  if (k >= 63 || (std::size_t{1} << k) > sets.size()) return false;
  const auto members = points.members();
  std::vector<char> seen(std::size_t{1} << k, 0);
  std::size_t distinct = 0;
  for (AtomSet s : sets) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (s.contains(members[j])) code |= std::size_t{1} << j;
    }
    if (!seen[code]) {
      seen[code] = 1;
      if (++distinct == seen.size()) return true;
    }
  }
  return false;
}

std::size_t vc_dimension(std::span<const AtomSet> sets, std::size_t atom_count,
                         std::size_t budget) {
  std::size_t checks = 0;
  auto charge = [&](std::size_t best) {
    if (++checks > budget) {
      throw ResourceError("vc_dimension budget of " + std::to_string(budget) + " checks exceeded",
                          best);
    }
  };

  std::vector<AtomSet> level;
  for (std::size_t a = 0; a < atom_count; ++a) {
    charge(0);
    if (shatters(sets, AtomSet::single(a))) level.push_back(AtomSet::single(a));
  }
  std::size_t best = level.empty() ? 0 : 1;

  while (!level.empty()) {
    std::unordered_set<std::uint64_t> shattered;
    for (AtomSet s : level) shattered.insert(s.bits());
    std::vector<AtomSet> next;
    for (AtomSet s : level) {
      // Grow only upward so each candidate is generated once.
      const std::size_t top = 63 - static_cast<std::size_t>(std::countl_zero(s.bits()));
      for (std::size_t a = top + 1; a < atom_count; ++a) {
        AtomSet t = s;
        t.insert(a);
        bool all_faces = true;
        for (std::size_t b : t.members()) {
          AtomSet face = t;
          face.erase(b);
          if (!shattered.contains(face.bits())) {
            all_faces = false;
            break;
          }
        }
        if (!all_faces) continue;
        charge(best);
        if (shatters(sets, t)) next.push_back(t);
      }
    }
    if (!next.empty()) best = next.front().size();
    level = std::move(next);
  }
  return best;
}

std::size_t vc_dimension(const HypothesisClass& H, std::size_t budget) {
  return vc_dimension(H.sets(), H.atom_count(), budget);
}

std::optional<SeparationWitness> find_three_point_separation(std::span<const AtomSet> sets,
                                                             std::size_t atom_count) {
  const AtomSet full = AtomSet::full(atom_count);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j) continue;
      const AtomSet only1 = sets[i].minus(sets[j]);
      const AtomSet only2 = sets[j].minus(sets[i]);
      const AtomSet outside = full.minus(sets[i] | sets[j]);
      if (only1.empty() || only2.empty() || outside.empty()) continue;
      return SeparationWitness{i, j, outside.first(), only1.first(), only2.first()};
    }
  }
  return std::nullopt;
}

bool separates_three_points(const HypothesisClass& H) {
  return find_three_point_separation(H.sets(), H.atom_count()).has_value();
}

bool witness_holds(std::span<const AtomSet> sets, const SeparationWitness& w) {
  if (w.h1 >= sets.size() || w.h2 >= sets.size()) return false;
  const AtomSet a = sets[w.h1];
  const AtomSet b = sets[w.h2];
  const bool cond_a = !a.contains(w.x0) && !b.contains(w.x0);
  const bool cond_b = a.contains(w.x1) && b.contains(w.x2) && !a.contains(w.x2) && !b.contains(w.x1);
  return cond_a && cond_b;
}

StructureReport analyze_structure(const HypothesisClass& H, std::size_t budget) {
  StructureReport r;
  r.vc_dimension = vc_dimension(H, budget);
  r.witness = find_three_point_separation(H.sets(), H.atom_count());
  r.separates_three_points = r.witness.has_value();
  return r;
}

OrderCertificate is_totally_ordered(std::span<const AtomSet> sets) {
  OrderCertificate cert;
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sets[a].size() < sets[b].size();
  });
  bool chain = true;
  for (std::size_t k = 1; k < order.size() && chain; ++k) {
    chain = sets[order[k - 1]].is_subset_of(sets[order[k]]);
  }
  if (chain) {
    cert.totally_ordered = true;
    cert.chain = std::move(order);
    return cert;
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (!sets[i].is_subset_of(sets[j]) && !sets[j].is_subset_of(sets[i])) {
        cert.violating_pair = {i, j};
        return cert;
      }
    }
  }
  // Unreachable for duplicate-free input; equal sets are comparable.
  cert.totally_ordered = true;
  cert.chain = std::move(order);
  return cert;
}

OrderCertificate is_totally_ordered(const HypothesisClass& H) { return is_totally_ordered(H.sets()); }

OrderCertificate is_totally_ordered(const HypothesisClass& H, std::span<const std::size_t> subset) {
  const auto sets = gather(H, subset);
  OrderCertificate cert = is_totally_ordered(sets);
  for (auto& i : cert.chain) i = subset[i];
  if (cert.violating_pair) {
    cert.violating_pair = std::pair{subset[cert.violating_pair->first], subset[cert.violating_pair->second]};
  }
  return cert;
}

std::optional<std::size_t> maximal_element(std::span<const AtomSet> sets) {
  if (sets.empty()) return std::nullopt;
  AtomSet all;
  for (AtomSet s : sets) all |= s;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i] == all) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> maximal_element(const HypothesisClass& H) { return maximal_element(H.sets()); }

std::optional<std::size_t> maximal_element(const HypothesisClass& H,
                                           std::span<const std::size_t> subset) {
  const auto sets = gather(H, subset);
  auto m = maximal_element(sets);
  if (!m) return std::nullopt;
  return subset[*m];
}

HypothesisClass difference_class(const HypothesisClass& H) {
  std::vector<AtomSet> diffs;
  diffs.reserve(H.size() * H.size());
  for (AtomSet a : H.sets()) {
    for (AtomSet b : H.sets()) diffs.push_back(a.minus(b));
  }
  return HypothesisClass::deduplicated(H.atom_count(), diffs);
}

HypothesisClass project(const HypothesisClass& H, AtomSet onto) {
  if (onto.empty()) throw InvalidArgument("cannot project onto an empty atom set");
  const auto members = onto.members();
  std::vector<AtomSet> traces;
  traces.reserve(H.size());
  for (AtomSet s : H.sets()) {
    AtomSet t;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (s.contains(members[j])) t.insert(j);
    }
    traces.push_back(t);
  }
  return HypothesisClass::deduplicated(members.size(), traces);
}

std::vector<AtomSet> gather(const HypothesisClass& H, std::span<const std::size_t> subset) {
  std::vector<AtomSet> out;
  out.reserve(subset.size());
  for (std::size_t i : subset) out.push_back(H[i]);
  return out;
}

}  // namespace npr
