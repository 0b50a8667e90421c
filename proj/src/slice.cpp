#include "bellhv/slice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellhv {

DensitySlice DensitySlice::point_masses(const std::array<double, 4>& masses) {
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("point masses must be finite and nonnegative");
    }
  }
  DensitySlice s;
  s.kind_ = SpaceKind::FourPoint;
  s.masses_ = masses;
  return s;
}

DensitySlice DensitySlice::pieces(SpaceKind kind, std::vector<LinearPiece> parts) {
  if (kind == SpaceKind::FourPoint) {
    throw std::invalid_argument("four-point densities are point masses");
  }
  std::erase_if(parts, [](const LinearPiece& p) { return !(p.hi > p.lo); });
  std::sort(parts.begin(), parts.end(),
            [](const LinearPiece& a, const LinearPiece& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const LinearPiece& p = parts[i];
    if (!std::isfinite(p.c0) || !std::isfinite(p.c1)) {
      throw std::invalid_argument("piece coefficients must be finite");
    }
    if (p.value_at(p.lo) < -1e-15 || p.value_at(p.hi) < -1e-15) {
      throw std::invalid_argument("density pieces must be nonnegative");
    }
    if (i > 0 && parts[i - 1].hi > p.lo) {
      throw std::invalid_argument("density pieces must not overlap");
    }
  }
  DensitySlice s;
  s.kind_ = kind;
  s.parts_ = std::move(parts);
  return s;
}

double DensitySlice::total_mass() const {
  if (kind_ == SpaceKind::FourPoint) {
    return masses_[0] + masses_[1] + masses_[2] + masses_[3];
  }
  double total = 0.0;
  for (const LinearPiece& p : parts_) total += p.mass();
  return total;
}

double DensitySlice::value_at(const LambdaPoint& p) const {
  if (p.kind() != kind_) {
    throw std::domain_error("lambda does not belong to this density's space");
  }
  if (kind_ == SpaceKind::FourPoint) {
    return masses_[fourpoint_index(p.pair_value())];
  }
  const double x = p.coordinate();
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), x,
      [](double v, const LinearPiece& q) { return v < q.lo; });
  if (it == parts_.begin()) return 0.0;
  --it;
  return (x >= it->lo && x < it->hi) ? it->value_at(x) : 0.0;
}

double DensitySlice::mass_over_interval(double x, double y) const {
  if (kind_ == SpaceKind::FourPoint) {
    throw std::domain_error("interval mass undefined for point masses");
  }
  if (!(y > x)) return 0.0;
  double total = 0.0;
  for (const LinearPiece& p : parts_) {
    if (p.hi <= x) continue;
    if (p.lo >= y) break;
    const double lo = std::max(p.lo, x);
    const double hi = std::min(p.hi, y);
    if (hi > lo) total += p.mass_over(lo, hi);
  }
  return total;
}

double DensitySlice::mass_over(const MeasurableSubset& set) const {
  if (set.kind() != kind_) {
    throw std::invalid_argument("set and density live in different spaces");
  }
  if (kind_ == SpaceKind::FourPoint) {
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
      if ((set.point_mask() >> i) & 1u) total += masses_[i];
    }
    return total;
  }
  double total = 0.0;
  for (const Interval& iv : set.intervals()) {
    total += mass_over_interval(iv.lo, iv.hi);
  }
  return total;
}

MeasurableSubset DensitySlice::support() const {
  if (kind_ == SpaceKind::FourPoint) {
    std::uint8_t mask = 0;
    for (int i = 0; i < 4; ++i) {
      if (masses_[i] > 0.0) mask |= static_cast<std::uint8_t>(1u << i);
    }
    return MeasurableSubset::from_points(mask);
  }
  std::vector<Interval> parts;
  for (const LinearPiece& p : parts_) {
    if (p.mass() > 0.0) parts.push_back({p.lo, p.hi});
  }
  return MeasurableSubset::from_intervals(kind_, std::move(parts));
}

std::vector<double> DensitySlice::breakpoints() const {
  std::vector<double> cuts;
  cuts.reserve(parts_.size() * 2);
  for (const LinearPiece& p : parts_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

LambdaPoint DensitySlice::sample(RngStream& rng) const {
  const double total = total_mass();
  if (!(total > 0.0)) {
    throw std::domain_error("cannot sample a zero-mass density");
  }
  double target = rng.uniform01() * total;
  if (target >= total) target = std::nextafter(total, 0.0);

  if (kind_ == SpaceKind::FourPoint) {
    int last_positive = -1;
    for (int i = 0; i < 4; ++i) {
      if (masses_[i] <= 0.0) continue;
      last_positive = i;
      if (target < masses_[i]) return LambdaPoint::pair(
          fourpoint_from_index(i).a_pre, fourpoint_from_index(i).b_pre);
      target -= masses_[i];
    }
    const DiscretePair p = fourpoint_from_index(last_positive);
    return LambdaPoint::pair(p.a_pre, p.b_pre);
  }

  const LinearPiece* chosen = nullptr;
  for (const LinearPiece& p : parts_) {
    const double m = p.mass();
    if (m <= 0.0) continue;
    chosen = &p;
    if (target < m) break;
    target -= m;
  }
  // target is the mass to accumulate inside the chosen piece
  double x;
  if (chosen->c1 == 0.0) {
    x = chosen->lo + target / chosen->c0;
  } else {
    // solve 0.5*c1*x^2 + c0*x = 0.5*c1*lo^2 + c0*lo + target for x
    const double k =
        0.5 * chosen->c1 * chosen->lo * chosen->lo + chosen->c0 * chosen->lo +
        target;
    x = (-chosen->c0 +
         std::sqrt(chosen->c0 * chosen->c0 + 2.0 * chosen->c1 * k)) /
        chosen->c1;
  }
  if (!(x >= chosen->lo)) x = chosen->lo;
  if (!(x < chosen->hi)) x = std::nextafter(chosen->hi, chosen->lo);
  return kind_ == SpaceKind::UnitInterval ? LambdaPoint::unit(x)
                                          : LambdaPoint::circle(x);
}

}  // namespace bellhv
