#pragma once

#include <cstdint>
#include <vector>

#include "bellhv/lambda.hpp"

namespace bellhv {

// Half-open coordinate interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// A measurable region of one of the hidden-variable spaces.
//
// Four-point space: a subset of the four points, stored as a bit mask in the
// (+,+), (+,-), (-,+), (-,-) index order. Segment spaces ([0,1) or [0,2*pi)):
// a finite union of half-open intervals held in canonical form, i.e. sorted,
// pairwise disjoint, non-adjacent, with zero-length pieces dropped. Structural
// equality of canonical forms is set equality up to measure zero.
class MeasurableSubset {
 public:
  static MeasurableSubset empty(SpaceKind kind);
  static MeasurableSubset full(SpaceKind kind);
  // FourPoint only; bit i set means point i belongs to the subset.
  static MeasurableSubset from_points(std::uint8_t mask);
  // Segment spaces only; intervals may overlap, canonicalization merges them.
  // Endpoints must lie within the domain ([0,1) resp. [0,2*pi]).
  static MeasurableSubset from_intervals(SpaceKind kind,
                                         std::vector<Interval> parts);

  SpaceKind kind() const { return kind_; }
  bool is_empty() const;
  // counting measure on the four-point space, length measure otherwise
  double base_measure() const;
  bool contains(const LambdaPoint& p) const;

  std::uint8_t point_mask() const { return mask_; }
  const std::vector<Interval>& intervals() const { return parts_; }

  MeasurableSubset intersect(const MeasurableSubset& other) const;
  MeasurableSubset unite(const MeasurableSubset& other) const;
  MeasurableSubset complement() const;

  friend bool operator==(const MeasurableSubset& a, const MeasurableSubset& b);
  friend bool operator!=(const MeasurableSubset& a, const MeasurableSubset& b) {
    return !(a == b);
  }

 private:
  SpaceKind kind_ = SpaceKind::FourPoint;
  std::uint8_t mask_ = 0;
  std::vector<Interval> parts_;

  double domain_length() const;
  void require_same_kind(const MeasurableSubset& other) const;
};

// Sorts, drops empty pieces, merges overlapping or adjacent ones.
void canonicalize_intervals(std::vector<Interval>& parts);

}  // namespace bellhv
