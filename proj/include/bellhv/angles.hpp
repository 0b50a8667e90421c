#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellhv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Polarizer/detector orientation, stored canonically in [0, 2*pi).
class Setting {
 public:
  Setting() = default;
  explicit Setting(double radians) : radians_(canonical(radians)) {}

  double radians() const { return radians_; }

  friend bool operator==(Setting a, Setting b) {
    return a.radians_ == b.radians_;
  }
  friend bool operator!=(Setting a, Setting b) { return !(a == b); }

  static double canonical(double x) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("setting angle must be finite");
    }
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // adding 2*pi to a tiny negative remainder can round to exactly 2*pi
    if (r >= kTwoPi) r = 0.0;
    return r;
  }

 private:
  double radians_ = 0.0;
};

// Separation between two orientations folded into [0, pi].
inline double folded_separation(Setting a, Setting b) {
  double d = std::fabs(a.radians() - b.radians());
  if (d > kPi) d = kTwoPi - d;
  return d;
}

inline double cos_separation(Setting a, Setting b) {
  return std::cos(folded_separation(a, b));
}

enum class Outcome : int { Plus = +1, Minus = -1 };

inline int sign(Outcome o) { return static_cast<int>(o); }

inline Outcome outcome_from_sign(int s) {
  return s >= 0 ? Outcome::Plus : Outcome::Minus;
}

// Joint outcome probability of the spin singlet, p(oa, ob) = (1 - oa*ob*cos)/4.
inline double singlet_joint(Outcome oa, Outcome ob, double cos_sep) {
  return 0.25 * (1.0 - sign(oa) * sign(ob) * cos_sep);
}

}  // namespace bellhv
