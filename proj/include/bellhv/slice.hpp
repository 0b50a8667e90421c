#pragma once

#include <array>
#include <vector>

#include "bellhv/rng.hpp"
#include "bellhv/sets.hpp"

namespace bellhv {

// One piece of a piecewise density: value(x) = c0 + c1*x on [lo, hi).
// Values are nonnegative over the piece. All densities that arise here are
// piecewise linear, so masses over subintervals are closed-form.
struct LinearPiece {
  double lo = 0.0;
  double hi = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;

  double value_at(double x) const { return c0 + c1 * x; }
  double mass_over(double x, double y) const {
    return c0 * (y - x) + 0.5 * c1 * (y * y - x * x);
  }
  double mass() const { return mass_over(lo, hi); }
};

// A conditional density frozen at one setting pair: either four point masses
// (counting measure) or a sorted, disjoint piece list (length measure).
// Pieces may carry value zero; support() skips them.
class DensitySlice {
 public:
  static DensitySlice point_masses(const std::array<double, 4>& masses);
  static DensitySlice pieces(SpaceKind kind, std::vector<LinearPiece> parts);

  SpaceKind kind() const { return kind_; }
  const std::array<double, 4>& masses() const { return masses_; }
  const std::vector<LinearPiece>& piece_list() const { return parts_; }

  double total_mass() const;
  double value_at(const LambdaPoint& p) const;
  double mass_over_interval(double x, double y) const;
  double mass_over(const MeasurableSubset& set) const;

  // region of strictly positive mass, canonical up to measure zero
  MeasurableSubset support() const;

  // sorted piece boundaries; empty for point masses
  std::vector<double> breakpoints() const;

  // inverse-CDF draw; requires total mass > 0, never lands on a
  // zero-mass point or piece
  LambdaPoint sample(RngStream& rng) const;

 private:
  SpaceKind kind_ = SpaceKind::FourPoint;
  std::array<double, 4> masses_{};
  std::vector<LinearPiece> parts_;
};

}  // namespace bellhv
