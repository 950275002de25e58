#pragma once

// Compiled-in instances used by the CLI, the tests and the experiments.

#include <optional>
#include <string>
#include <vector>

#include "npr/space.hpp"

namespace npr {

struct Fixture {
  std::string name;
  std::string description;
  FiniteSpace space;
  HypothesisClass H;
  std::optional<Distribution> mu0;
  std::optional<Distribution> mu1;
  double alpha = 0.0;
  double epsilon0 = 0.0;
  std::size_t documented_vc = 0;
  bool documented_separation = false;
};

/// The seven catalog entries, in catalog order.
const std::vector<std::string>& catalog_names();
/// Catalog entries plus auxiliary instances.
const std::vector<std::string>& fixture_names();

/// Throws InputError for an unknown name.
Fixture make_fixture(const std::string& name);

/// {x >= i : i = 0..m} over atoms 0..m-1 (the last one is empty).
std::vector<AtomSet> threshold_sets(std::size_t m);

}  // namespace npr
