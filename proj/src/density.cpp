#include "bellhv/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellhv/errors.hpp"

namespace bellhv {

namespace {

constexpr std::size_t kMaxBins = 10'000;

void require_weights_usable(const std::vector<double>& h) {
  if (h.empty()) throw std::invalid_argument("weight list must not be empty");
  if (h.size() > kMaxBins) {
    throw std::invalid_argument("weight partition exceeds the bin limit");
  }
  bool any_positive = false;
  for (double v : h) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::invalid_argument("at least one weight must be positive");
  }
}

}  // namespace

WeightSpec WeightSpec::fourpoint(const std::array<double, 4>& w) {
  WeightSpec s;
  s.point_weights = w;
  return s;
}

WeightSpec WeightSpec::bins(std::vector<double> heights) {
  WeightSpec s;
  s.bin_heights = std::move(heights);
  return s;
}

WeightSpec WeightSpec::arcs(ArcWeights w) {
  WeightSpec s;
  s.arc_weights = std::move(w);
  return s;
}

WeightSpec WeightSpec::linear_ramp() {
  WeightSpec s;
  s.linear = true;
  return s;
}

void WeightSpec::validate(SpaceKind kind) const {
  const int alternatives = (point_weights ? 1 : 0) + (bin_heights ? 1 : 0) +
                           (arc_weights ? 1 : 0) + (linear ? 1 : 0);
  if (alternatives != 1) {
    throw std::invalid_argument("weight spec must use exactly one alternative");
  }
  switch (kind) {
    case SpaceKind::FourPoint:
      if (!point_weights) {
        throw std::invalid_argument("four-point model takes four point weights");
      }
      require_weights_usable({point_weights->begin(), point_weights->end()});
      return;
    case SpaceKind::UnitInterval:
      if (linear) return;
      if (!bin_heights) {
        throw std::invalid_argument(
            "unit-interval model takes bin heights or the linear ramp");
      }
      require_weights_usable(*bin_heights);
      return;
    case SpaceKind::Circle:
      if (!arc_weights) {
        throw std::invalid_argument("circle model takes arc weights");
      }
      require_weights_usable(arc_weights->heights);
      if (arc_weights->edges.size() != arc_weights->heights.size()) {
        throw std::invalid_argument("arc edges and heights differ in length");
      }
      for (std::size_t i = 0; i < arc_weights->edges.size(); ++i) {
        const double e = arc_weights->edges[i];
        if (!std::isfinite(e) || e < 0.0 || e >= kTwoPi) {
          throw std::invalid_argument("arc edges must lie in [0, 2*pi)");
        }
        if (i > 0 && !(e > arc_weights->edges[i - 1])) {
          throw std::invalid_argument("arc edges must be strictly increasing");
        }
      }
      return;
  }
}

bool WeightSpec::is_unit() const {
  auto all_one = [](auto first, auto last) {
    return std::all_of(first, last, [](double v) { return v == 1.0; });
  };
  if (point_weights) return all_one(point_weights->begin(), point_weights->end());
  if (bin_heights) return all_one(bin_heights->begin(), bin_heights->end());
  if (arc_weights) {
    return all_one(arc_weights->heights.begin(), arc_weights->heights.end());
  }
  return false;  // the linear ramp is never the unit weight
}

ConditionalDensity::ConditionalDensity(std::shared_ptr<const HVModel> model,
                                       DensityForm form,
                                       std::optional<WeightSpec> weights,
                                       MechanismPair mechanism)
    : model_(std::move(model)),
      form_(form),
      weights_(std::move(weights)),
      mechanism_(mechanism) {
  if (!model_) throw std::invalid_argument("density requires a model");
  if (form_ == DensityForm::Weighted) {
    weights_->validate(model_->space().kind);
  }
}

ConditionalDensity ConditionalDensity::equilibrium(
    std::shared_ptr<const HVModel> model, MechanismPair mechanism) {
  return ConditionalDensity(std::move(model), DensityForm::Equilibrium,
                            std::nullopt, mechanism);
}

ConditionalDensity ConditionalDensity::weighted(
    std::shared_ptr<const HVModel> model, WeightSpec weights,
    MechanismPair mechanism) {
  return ConditionalDensity(std::move(model), DensityForm::Weighted,
                            std::move(weights), mechanism);
}

namespace {

// merge sorted cut lists into the ordered refinement of [0, len)
std::vector<double> merged_cuts(const std::vector<double>& a,
                                const std::vector<double>& b, double len) {
  std::vector<double> cuts;
  cuts.reserve(a.size() + b.size() + 2);
  cuts.push_back(0.0);
  cuts.insert(cuts.end(), a.begin(), a.end());
  cuts.insert(cuts.end(), b.begin(), b.end());
  cuts.push_back(len);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::erase_if(cuts, [len](double v) { return v < 0.0 || v > len; });
  return cuts;
}

DensitySlice equilibrium_slice(const HVModel& model, Setting m_a, Setting m_b) {
  const SpaceKind kind = model.space().kind;
  const double c = cos_separation(m_a, m_b);

  if (kind == SpaceKind::FourPoint) {
    std::array<double, 4> masses;
    for (int i = 0; i < 4; ++i) {
      const DiscretePair p = fourpoint_from_index(i);
      masses[i] = singlet_joint(p.a_pre, p.b_pre, c);
    }
    return DensitySlice::point_masses(masses);
  }

  if (kind == SpaceKind::UnitInterval) {
    // uniform and settings-independent; the indicators carry all the
    // setting dependence for this model
    return DensitySlice::pieces(kind, {{0.0, 1.0, 1.0, 0.0}});
  }

  // Circle: the outcome pair is constant between breakpoints; each constant-
  // outcome region carries its singlet joint mass spread uniformly. A region
  // may wrap the seam and appear as two pieces sharing one density value.
  const double len = model.space().domain_length();
  const std::vector<double> cuts =
      merged_cuts(model.outcome_breakpoints(m_a, m_b), {}, len);

  struct Region {
    double first_lo, first_hi;
    double second_lo = 0.0, second_hi = 0.0;  // wrap piece, if any
    int cell = 0;
  };
  std::vector<Region> regions;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const LambdaPoint mid = LambdaPoint::circle(0.5 * (lo + hi));
    const int cell = fourpoint_index(model.outcome_A(mid, m_a, m_b),
                                     model.outcome_B(mid, m_a, m_b));
    regions.push_back({lo, hi, 0.0, 0.0, cell});
  }
  // glue the piece after the seam onto the piece before it when they share an
  // outcome cell (same region crossing 0)
  if (regions.size() >= 2 && regions.front().cell == regions.back().cell &&
      regions.front().first_lo == 0.0 && regions.back().first_hi == len) {
    regions.back().second_lo = regions.front().first_lo;
    regions.back().second_hi = regions.front().first_hi;
    regions.erase(regions.begin());
  }

  std::vector<LinearPiece> parts;
  for (const Region& r : regions) {
    const double total_len =
        (r.first_hi - r.first_lo) + (r.second_hi - r.second_lo);
    const DiscretePair p = fourpoint_from_index(r.cell);
    const double mass = singlet_joint(p.a_pre, p.b_pre, c);
    const double value = total_len > 0.0 ? mass / total_len : 0.0;
    parts.push_back({r.first_lo, r.first_hi, value, 0.0});
    if (r.second_hi > r.second_lo) {
      parts.push_back({r.second_lo, r.second_hi, value, 0.0});
    }
  }
  return DensitySlice::pieces(kind, std::move(parts));
}

std::vector<double> weight_cuts(const WeightSpec& w, double len) {
  if (w.bin_heights) {
    std::vector<double> cuts;
    const std::size_t n = w.bin_heights->size();
    for (std::size_t i = 1; i < n; ++i) {
      cuts.push_back(static_cast<double>(i) / static_cast<double>(n));
    }
    return cuts;
  }
  if (w.arc_weights) return w.arc_weights->edges;
  (void)len;
  return {};
}

double weight_value(const WeightSpec& w, double x) {
  if (w.linear) return 2.0 * x;
  if (w.bin_heights) {
    const std::size_t n = w.bin_heights->size();
    auto i = static_cast<std::size_t>(x * static_cast<double>(n));
    if (i >= n) i = n - 1;
    return (*w.bin_heights)[i];
  }
  const ArcWeights& arcs = *w.arc_weights;
  // last arc wraps: positions before edges[0] belong to it
  auto it = std::upper_bound(arcs.edges.begin(), arcs.edges.end(), x);
  const std::size_t idx =
      it == arcs.edges.begin() ? arcs.edges.size() - 1
                               : static_cast<std::size_t>(it - arcs.edges.begin()) - 1;
  return arcs.heights[idx];
}

DensitySlice weighted_slice(const HVModel& model, const WeightSpec& w,
                            Setting m_a, Setting m_b) {
  const DensitySlice eq = equilibrium_slice(model, m_a, m_b);

  if (eq.kind() == SpaceKind::FourPoint) {
    std::array<double, 4> masses = eq.masses();
    for (int i = 0; i < 4; ++i) masses[i] *= (*w.point_weights)[i];
    const double z = masses[0] + masses[1] + masses[2] + masses[3];
    if (z <= 0.0) {
      throw DegenerateDistributionError(
          "weight removes all equilibrium mass at these settings");
    }
    for (double& m : masses) m /= z;
    return DensitySlice::point_masses(masses);
  }

  const double len = model.space().domain_length();
  const std::vector<double> cuts =
      merged_cuts(eq.breakpoints(), weight_cuts(w, len), len);
  std::vector<LinearPiece> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const LambdaPoint probe = eq.kind() == SpaceKind::UnitInterval
                                  ? LambdaPoint::unit(mid)
                                  : LambdaPoint::circle(mid);
    const double base = eq.value_at(probe);
    if (w.linear) {
      parts.push_back({lo, hi, 0.0, 2.0 * base});
    } else {
      parts.push_back({lo, hi, base * weight_value(w, mid), 0.0});
    }
  }
  DensitySlice raw = DensitySlice::pieces(eq.kind(), std::move(parts));
  const double z = raw.total_mass();
  if (z <= 0.0) {
    throw DegenerateDistributionError(
        "weight removes all equilibrium mass at these settings");
  }
  std::vector<LinearPiece> scaled = raw.piece_list();
  for (LinearPiece& p : scaled) {
    p.c0 /= z;
    p.c1 /= z;
  }
  return DensitySlice::pieces(eq.kind(), std::move(scaled));
}

}  // namespace

DensitySlice ConditionalDensity::slice(Setting m_a, Setting m_b) const {
  if (form_ == DensityForm::Equilibrium) {
    return equilibrium_slice(*model_, m_a, m_b);
  }
  return weighted_slice(*model_, *weights_, m_a, m_b);
}

double ConditionalDensity::density_at(const LambdaPoint& lambda, Setting m_a,
                                      Setting m_b) const {
  if (!model_->space().contains(lambda)) {
    throw std::domain_error("lambda outside the model's space");
  }
  return slice(m_a, m_b).value_at(lambda);
}

double ConditionalDensity::normalization_residual(Setting m_a,
                                                  Setting m_b) const {
  return std::fabs(slice(m_a, m_b).total_mass() - 1.0);
}

LambdaPoint ConditionalDensity::sample(Setting m_a, Setting m_b,
                                       RngStream& rng) const {
  return slice(m_a, m_b).sample(rng);
}

bool ConditionalDensity::same_form(const ConditionalDensity& other) const {
  return model_id() == other.model_id() && form_ == other.form_ &&
         weights_ == other.weights_;
}

ConditionalDensity equilibrium_for(const std::string& model_id) {
  return ConditionalDensity::equilibrium(make_model(model_id));
}

ConditionalDensity perturb(const ConditionalDensity& d, const WeightSpec& w) {
  if (d.form() != DensityForm::Equilibrium) {
    throw std::invalid_argument(
        "perturb applies weights to equilibrium densities only");
  }
  w.validate(d.model().space().kind);
  if (w.is_unit()) return d;
  return ConditionalDensity::weighted(d.model_ptr(), w, d.mechanism());
}

}  // namespace bellhv
