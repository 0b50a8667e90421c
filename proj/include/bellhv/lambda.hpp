#pragma once

#include <stdexcept>

#include "bellhv/angles.hpp"

namespace bellhv {

enum class SpaceKind { FourPoint, UnitInterval, Circle };

inline const char* space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::FourPoint:
      return "four-point";
    case SpaceKind::UnitInterval:
      return "unit-interval";
    default:
      return "circle";
  }
}

// Hidden variable for the four-point space: both outcomes fixed in advance.
struct DiscretePair {
  Outcome a_pre = Outcome::Plus;
  Outcome b_pre = Outcome::Plus;
};

// Index order for the four-point space: (+,+), (+,-), (-,+), (-,-).
inline int fourpoint_index(Outcome a_pre, Outcome b_pre) {
  return (a_pre == Outcome::Plus ? 0 : 2) + (b_pre == Outcome::Plus ? 0 : 1);
}

inline int fourpoint_index(const DiscretePair& p) {
  return fourpoint_index(p.a_pre, p.b_pre);
}

inline DiscretePair fourpoint_from_index(int idx) {
  if (idx < 0 || idx > 3) throw std::domain_error("four-point index out of range");
  return {idx < 2 ? Outcome::Plus : Outcome::Minus,
          (idx % 2) == 0 ? Outcome::Plus : Outcome::Minus};
}

inline const char* fourpoint_label(int idx) {
  static const char* const kLabels[4] = {"++", "+-", "-+", "--"};
  if (idx < 0 || idx > 3) throw std::domain_error("four-point index out of range");
  return kLabels[idx];
}

// One hidden-variable value, tagged with the space it lives in.
class LambdaPoint {
 public:
  static LambdaPoint pair(Outcome a_pre, Outcome b_pre) {
    LambdaPoint p;
    p.kind_ = SpaceKind::FourPoint;
    p.pair_ = {a_pre, b_pre};
    return p;
  }

  static LambdaPoint unit(double x) {
    if (!(x >= 0.0 && x < 1.0)) {
      throw std::domain_error("unit-interval lambda must lie in [0, 1)");
    }
    LambdaPoint p;
    p.kind_ = SpaceKind::UnitInterval;
    p.coord_ = x;
    return p;
  }

  static LambdaPoint circle(double phi) {
    LambdaPoint p;
    p.kind_ = SpaceKind::Circle;
    p.coord_ = Setting::canonical(phi);
    return p;
  }

  SpaceKind kind() const { return kind_; }

  const DiscretePair& pair_value() const {
    require(SpaceKind::FourPoint);
    return pair_;
  }

  double coordinate() const {
    if (kind_ == SpaceKind::FourPoint) {
      throw std::domain_error("four-point lambda has no coordinate");
    }
    return coord_;
  }

 private:
  void require(SpaceKind k) const {
    if (kind_ != k) throw std::domain_error("lambda kind mismatch");
  }

  SpaceKind kind_ = SpaceKind::FourPoint;
  DiscretePair pair_{};
  double coord_ = 0.0;
};

// The hidden-variable space itself: four points under counting measure, or a
// half-open segment ([0,1) or [0,2*pi)) under length measure.
struct LambdaSpace {
  SpaceKind kind = SpaceKind::FourPoint;

  // upper end of the coordinate range; unused for the four-point space
  double domain_length() const {
    switch (kind) {
      case SpaceKind::UnitInterval:
        return 1.0;
      case SpaceKind::Circle:
        return kTwoPi;
      default:
        return 0.0;
    }
  }

  double total_base_measure() const {
    return kind == SpaceKind::FourPoint ? 4.0 : domain_length();
  }

  bool contains(const LambdaPoint& p) const { return p.kind() == kind; }
};

}  // namespace bellhv
