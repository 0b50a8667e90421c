#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "bellhv/sets.hpp"

namespace bellhv::testutil {

// Structural comparison up to endpoint jitter from trig roundoff; exact
// identities should use operator== instead.
inline void expect_set_near(const MeasurableSubset& got,
                            const MeasurableSubset& want, double tol = 1e-12) {
  REQUIRE(got.kind() == want.kind());
  if (got.kind() == SpaceKind::FourPoint) {
    CHECK(got.point_mask() == want.point_mask());
    return;
  }
  REQUIRE(got.intervals().size() == want.intervals().size());
  for (std::size_t i = 0; i < got.intervals().size(); ++i) {
    CHECK(std::abs(got.intervals()[i].lo - want.intervals()[i].lo) <= tol);
    CHECK(std::abs(got.intervals()[i].hi - want.intervals()[i].hi) <= tol);
  }
}

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// random canonical subset of [0, len) with up to max_parts raw intervals
inline MeasurableSubset rand_subset(std::mt19937_64& rng, SpaceKind kind,
                                    double len, int max_parts) {
  const int parts = static_cast<int>(rng() % (max_parts + 1));
  std::vector<Interval> raw;
  for (int i = 0; i < parts; ++i) {
    double a = rand_in(rng, 0.0, len);
    double b = rand_in(rng, 0.0, len);
    if (b < a) std::swap(a, b);
    raw.push_back({a, b});
  }
  return MeasurableSubset::from_intervals(kind, raw);
}

}  // namespace bellhv::testutil
