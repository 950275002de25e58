#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "npr/space.hpp"

namespace npr {

/// Name of the generator stack, recorded in output metadata.
inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-derive/53bit-uniform";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for a stream index; derive(derive(s, a), b) gives a seed tree.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return mix64(mix64(parent) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Deterministic generator. The uniform conversion is done by hand so draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed distribution.
class Sampler {
 public:
  explicit Sampler(const Distribution& d);

  std::size_t draw(Rng& rng) const;
  /// Adds n draws to counts (size m).
  void draw_counts(Rng& rng, std::size_t n, std::vector<std::size_t>& counts) const;
  std::size_t atom_count() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

/// n i.i.d. draws from d. Identical (d, n, seed) give identical samples.
Sample draw_sample(const Distribution& d, std::size_t n, std::uint64_t seed);

}  // namespace npr
