#pragma once

#include <cmath>
#include <random>

#include "wgnls/constants.hpp"
#include "wgnls/field.hpp"

namespace wgnls::test {

inline Field3 random_field(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field3 f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

inline Field2 random_field(const Grid2& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field2 f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Computed once per test binary; the full pipeline takes a few seconds.
inline const GNConstants& shared_constants() {
  static const GNConstants c = compute_constants();
  return c;
}

}  // namespace wgnls::test
