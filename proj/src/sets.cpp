#include "bellhv/sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bellhv {

void canonicalize_intervals(std::vector<Interval>& parts) {
  std::erase_if(parts, [](const Interval& iv) { return !(iv.hi > iv.lo); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (const Interval& iv : parts) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  parts = std::move(merged);
}

MeasurableSubset MeasurableSubset::empty(SpaceKind kind) {
  MeasurableSubset s;
  s.kind_ = kind;
  return s;
}

MeasurableSubset MeasurableSubset::full(SpaceKind kind) {
  MeasurableSubset s;
  s.kind_ = kind;
  if (kind == SpaceKind::FourPoint) {
    s.mask_ = 0x0f;
  } else {
    s.parts_ = {{0.0, s.domain_length()}};
  }
  return s;
}

MeasurableSubset MeasurableSubset::from_points(std::uint8_t mask) {
  if (mask > 0x0f) throw std::invalid_argument("point mask uses bits 0..3 only");
  MeasurableSubset s;
  s.kind_ = SpaceKind::FourPoint;
  s.mask_ = mask;
  return s;
}

MeasurableSubset MeasurableSubset::from_intervals(SpaceKind kind,
                                                  std::vector<Interval> parts) {
  if (kind == SpaceKind::FourPoint) {
    throw std::invalid_argument("four-point subsets are built from point masks");
  }
  MeasurableSubset s;
  s.kind_ = kind;
  const double len = s.domain_length();
  for (const Interval& iv : parts) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw std::invalid_argument("interval endpoints must be finite");
    }
    if (iv.hi > iv.lo && (iv.lo < 0.0 || iv.hi > len)) {
      throw std::invalid_argument("interval endpoints outside the domain");
    }
  }
  s.parts_ = std::move(parts);
  canonicalize_intervals(s.parts_);
  return s;
}

bool MeasurableSubset::is_empty() const {
  return kind_ == SpaceKind::FourPoint ? mask_ == 0 : parts_.empty();
}

double MeasurableSubset::base_measure() const {
  if (kind_ == SpaceKind::FourPoint) {
    return static_cast<double>(std::popcount(static_cast<unsigned>(mask_)));
  }
  double total = 0.0;
  for (const Interval& iv : parts_) total += iv.length();
  return total;
}

bool MeasurableSubset::contains(const LambdaPoint& p) const {
  if (p.kind() != kind_) {
    throw std::domain_error("lambda does not belong to this space");
  }
  if (kind_ == SpaceKind::FourPoint) {
    return (mask_ >> fourpoint_index(p.pair_value())) & 1u;
  }
  const double x = p.coordinate();
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), x,
      [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x >= it->lo && x < it->hi;
}

MeasurableSubset MeasurableSubset::intersect(const MeasurableSubset& other) const {
  require_same_kind(other);
  MeasurableSubset out;
  out.kind_ = kind_;
  if (kind_ == SpaceKind::FourPoint) {
    out.mask_ = mask_ & other.mask_;
    return out;
  }
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const Interval& a = parts_[i];
    const Interval& b = other.parts_[j];
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (hi > lo) out.parts_.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  canonicalize_intervals(out.parts_);
  return out;
}

MeasurableSubset MeasurableSubset::unite(const MeasurableSubset& other) const {
  require_same_kind(other);
  MeasurableSubset out;
  out.kind_ = kind_;
  if (kind_ == SpaceKind::FourPoint) {
    out.mask_ = mask_ | other.mask_;
    return out;
  }
  out.parts_ = parts_;
  out.parts_.insert(out.parts_.end(), other.parts_.begin(), other.parts_.end());
  canonicalize_intervals(out.parts_);
  return out;
}

MeasurableSubset MeasurableSubset::complement() const {
  MeasurableSubset out;
  out.kind_ = kind_;
  if (kind_ == SpaceKind::FourPoint) {
    out.mask_ = static_cast<std::uint8_t>(~mask_ & 0x0f);
    return out;
  }
  double cursor = 0.0;
  for (const Interval& iv : parts_) {
    if (iv.lo > cursor) out.parts_.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  const double len = domain_length();
  if (cursor < len) out.parts_.push_back({cursor, len});
  canonicalize_intervals(out.parts_);
  return out;
}

bool operator==(const MeasurableSubset& a, const MeasurableSubset& b) {
  return a.kind_ == b.kind_ && a.mask_ == b.mask_ && a.parts_ == b.parts_;
}

double MeasurableSubset::domain_length() const {
  LambdaSpace space{kind_};
  return space.domain_length();
}

void MeasurableSubset::require_same_kind(const MeasurableSubset& other) const {
  if (kind_ != other.kind_) {
    throw std::invalid_argument("set operation across different spaces");
  }
}

}  // namespace bellhv
