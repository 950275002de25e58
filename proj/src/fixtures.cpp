#include "npr/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace npr {

std::vector<AtomSet> threshold_sets(std::size_t m) {
  std::vector<AtomSet> out;
  for (std::size_t i = 0; i <= m; ++i) out.push_back(AtomSet::full(m).minus(AtomSet::full(i)));
  return out;
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t m, std::size_t start = 0) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(prefix + std::to_string(i + start));
  return out;
}

AtomSet of(std::initializer_list<std::size_t> atoms) {
  AtomSet s;
  for (auto a : atoms) s.insert(a);
  return s;
}

Fixture one_sided() {
  const std::size_t m = 10;
  return {"one_sided_thresholds", "1{x >= i} on atoms 0..9, i = 0..10",
          FiniteSpace(numbered("", m)), HypothesisClass(m, threshold_sets(m)),
          std::nullopt, std::nullopt, 0.0, 0.0, 1, false};
}

Fixture two_sided() {
  const std::size_t m = 10;
  auto sets = threshold_sets(m);
  for (std::size_t i = 0; i < m; ++i) sets.push_back(AtomSet::full(i + 1));
  return {"two_sided_thresholds", "1{x >= i} and 1{x <= i} on atoms 0..9",
          FiniteSpace(numbered("", m)), HypothesisClass::deduplicated(m, sets),
          std::nullopt, std::nullopt, 0.0, 0.0, 2, true};
}

Fixture singletons() {
  const std::size_t m = 5;
  std::vector<AtomSet> sets;
  for (std::size_t i = 0; i < m; ++i) sets.push_back(AtomSet::single(i));
  return {"singleton_indicators", "1{x = a} for each of 5 atoms", FiniteSpace(numbered("x", m)),
          HypothesisClass(m, sets), std::nullopt, std::nullopt, 0.0, 0.0, 1, true};
}

Fixture composite() {
  const std::size_t m = 10;
  auto sets = threshold_sets(m);
  sets.push_back(AtomSet::full(m).minus(AtomSet::single(1)));
  return {"remark2_composite", "thresholds 1{x >= i} plus 1{x != x1}, atoms x0..x9",
          FiniteSpace(numbered("x", m)), HypothesisClass(m, sets),
          std::nullopt, std::nullopt, 0.0, 0.0, 2, false};
}

Fixture example2() {
  const std::size_t m = 8;
  auto sets = threshold_sets(m);
  sets.pop_back();
  std::vector<double> mu0(m);
  for (std::size_t i = 0; i + 1 < m; ++i) mu0[i] = std::ldexp(1.0, -static_cast<int>(i + 1));
  mu0[m - 1] = mu0[m - 2];
  return {"example2_chain", "nonempty thresholds on 8 atoms with dyadic mu0",
          FiniteSpace(numbered("x", m, 1)), HypothesisClass(m, sets),
          Distribution(mu0), Distribution::uniform(m), 0.2, 0.0625, 1, false};
}

Fixture example3() {
  return {"example3_chain", "thresholds at x1 < x2 < x3, mu0 = (1-a-e/2, e/2, a)",
          FiniteSpace({"x1", "x2", "x3"}), HypothesisClass(3, {of({0, 1, 2}), of({1, 2}), of({2})}),
          Distribution({0.75, 0.05, 0.2}), Distribution({0.25, 0.25, 0.5}), 0.2, 0.1, 1, false};
}

Fixture powerset3() {
  std::vector<AtomSet> sets;
  for (std::uint64_t b = 0; b < 8; ++b) sets.emplace_back(b);
  return {"powerset3", "all subsets of 3 atoms", FiniteSpace(numbered("x", 3)),
          HypothesisClass(3, sets), std::nullopt, std::nullopt, 0.0, 0.0, 3, true};
}

// The three-atom chain with two zero-mass atoms g1, g2 between x1 and x2. The
// hypotheses above {x2, x3} differ only on those atoms, so no finite chain top
// exists inside the feasible set.
Fixture example3_gap() {
  return {"example3_gap", "example3_chain plus zero-mass atoms g1, g2 splitting the chain top",
          FiniteSpace({"x1", "g1", "g2", "x2", "x3"}),
          HypothesisClass(5, {of({0, 1, 2, 3, 4}), of({3, 4}), of({4}), of({1, 3, 4}), of({2, 3, 4})}),
          Distribution({0.75, 0.0, 0.0, 0.05, 0.2}), Distribution({0.25, 0.0, 0.0, 0.25, 0.5}),
          0.2, 0.1, 2, true};
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "one_sided_thresholds", "two_sided_thresholds", "singleton_indicators", "remark2_composite",
      "example2_chain",       "example3_chain",       "powerset3"};
  return names;
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = [] {
    auto n = catalog_names();
    n.push_back("example3_gap");
    return n;
  }();
  return names;
}

Fixture make_fixture(const std::string& name) {
  if (name == "one_sided_thresholds") return one_sided();
  if (name == "two_sided_thresholds") return two_sided();
  if (name == "singleton_indicators") return singletons();
  if (name == "remark2_composite") return composite();
  if (name == "example2_chain") return example2();
  if (name == "example3_chain") return example3();
  if (name == "powerset3") return powerset3();
  if (name == "example3_gap") return example3_gap();
  throw InputError("unknown fixture '" + name + "'");
}

}  // namespace npr
