#include "bellhv/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "bellhv/errors.hpp"

namespace bellhv {

namespace {

// pieces of region classified by the sign of A at the given settings
MeasurableSubset classify_a(const ConditionalDensity& d,
                            const MeasurableSubset& region, Setting m_a,
                            Setting m_b, Outcome wanted) {
  const HVModel& model = d.model();
  if (region.kind() == SpaceKind::FourPoint) {
    std::uint8_t mask = 0;
    for (int i = 0; i < 4; ++i) {
      if (!((region.point_mask() >> i) & 1u)) continue;
      const DiscretePair p = fourpoint_from_index(i);
      const LambdaPoint lambda = LambdaPoint::pair(p.a_pre, p.b_pre);
      if (model.outcome_A(lambda, m_a, m_b) == wanted) {
        mask |= static_cast<std::uint8_t>(1u << i);
      }
    }
    return MeasurableSubset::from_points(mask);
  }

  const std::vector<double> cuts = model.outcome_breakpoints(m_a, m_b);
  std::vector<Interval> kept;
  for (const Interval& iv : region.intervals()) {
    std::vector<double> bounds = {iv.lo};
    for (double c : cuts) {
      if (c > iv.lo && c < iv.hi) bounds.push_back(c);
    }
    bounds.push_back(iv.hi);
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
      const double lo = bounds[k], hi = bounds[k + 1];
      const double mid = 0.5 * (lo + hi);
      const LambdaPoint lambda = region.kind() == SpaceKind::UnitInterval
                                     ? LambdaPoint::unit(mid)
                                     : LambdaPoint::circle(mid);
      if (model.outcome_A(lambda, m_a, m_b) == wanted) kept.push_back({lo, hi});
    }
  }
  return MeasurableSubset::from_intervals(region.kind(), std::move(kept));
}

void require_family(const ConditionalDensity& d, CausalFamily family,
                    const char* what) {
  if (d.model().family() != family) {
    throw NotApplicableError(what);
  }
}

}  // namespace

MeasurableSubset support(const ConditionalDensity& d, Setting m_a,
                         Setting m_b) {
  return d.slice(m_a, m_b).support();
}

MeasurableSubset support(const ConditionalDensity& d, Setting m_a, Setting m_b,
                         Setting m_b_alt) {
  return support(d, m_a, m_b).unite(support(d, m_a, m_b_alt));
}

PartitionReport partition(const ConditionalDensity& d, Setting m_a,
                          Setting m_b, Setting m_b_alt) {
  PartitionReport rep;
  rep.m_a = m_a;
  rep.m_b = m_b;
  rep.m_b_alt = m_b_alt;
  rep.s = support(d, m_a, m_b, m_b_alt);
  rep.s_a_plus = classify_a(d, rep.s, m_a, m_b, Outcome::Plus);
  rep.s_a_minus = classify_a(d, rep.s, m_a, m_b, Outcome::Minus);
  rep.s_alt_a_plus = classify_a(d, rep.s, m_a, m_b_alt, Outcome::Plus);
  rep.s_alt_a_minus = classify_a(d, rep.s, m_a, m_b_alt, Outcome::Minus);
  return rep;
}

TransitionReport transitions(const ConditionalDensity& d, Setting m_a,
                             Setting m_b, Setting m_b_alt) {
  const PartitionReport p = partition(d, m_a, m_b, m_b_alt);
  const DensitySlice slice = d.slice(m_a, m_b);

  TransitionReport rep;
  rep.m_a = m_a;
  rep.m_b = m_b;
  rep.m_b_alt = m_b_alt;
  rep.family = d.model().family();
  rep.t_plus_minus = p.s_a_plus.intersect(p.s_alt_a_minus);
  rep.t_minus_plus = p.s_a_minus.intersect(p.s_alt_a_plus);
  rep.measure_plus_minus = slice.mass_over(rep.t_plus_minus);
  rep.measure_minus_plus = slice.mass_over(rep.t_minus_plus);
  return rep;
}

double detailed_balance_residual(const ConditionalDensity& d,
                                 const TransitionReport& t) {
  if (t.family == CausalFamily::Superdeterministic ||
      d.model().family() == CausalFamily::Superdeterministic) {
    throw NotApplicableError(
        "no transition sets exist for superdeterministic models; their "
        "distribution change is a reshuffle over a fixed partition");
  }
  const DensitySlice slice = d.slice(t.m_a, t.m_b);
  return slice.mass_over(t.t_plus_minus) - slice.mass_over(t.t_minus_plus);
}

NonlocalShift marginal_shift_nonlocal(const ConditionalDensity& d, Setting m_a,
                                      Setting m_b, Setting m_b_alt) {
  require_family(d, CausalFamily::NonlocalDeterministic,
                 "transition-set marginal shift applies to "
                 "nonlocal-deterministic models only");
  const PartitionReport p = partition(d, m_a, m_b, m_b_alt);
  const DensitySlice slice = d.slice(m_a, m_b);

  NonlocalShift shift;
  shift.via_transitions =
      slice.mass_over(p.s_a_minus.intersect(p.s_alt_a_plus)) -
      slice.mass_over(p.s_a_plus.intersect(p.s_alt_a_minus));
  shift.via_supports =
      slice.mass_over(p.s_alt_a_plus) - slice.mass_over(p.s_a_plus);
  return shift;
}

double marginal_shift_sd(const ConditionalDensity& d, Setting m_a, Setting m_b,
                         Setting m_b_alt) {
  require_family(d, CausalFamily::Superdeterministic,
                 "fixed-partition marginal shift applies to superdeterministic "
                 "models only");
  const PartitionReport p = partition(d, m_a, m_b, m_b_alt);
  return d.slice(m_a, m_b_alt).mass_over(p.s_a_plus) -
         d.slice(m_a, m_b).mass_over(p.s_a_plus);
}

double reshuffle_mass(const ConditionalDensity& d, Setting m_a, Setting m_b,
                      Setting m_b_alt) {
  const DensitySlice base = d.slice(m_a, m_b);
  const DensitySlice alt = d.slice(m_a, m_b_alt);

  if (base.kind() == SpaceKind::FourPoint) {
    double l1 = 0.0;
    for (int i = 0; i < 4; ++i) {
      l1 += std::fabs(alt.masses()[i] - base.masses()[i]);
    }
    return 0.5 * l1;
  }

  std::vector<double> cuts = base.breakpoints();
  const std::vector<double> alt_cuts = alt.breakpoints();
  cuts.insert(cuts.end(), alt_cuts.begin(), alt_cuts.end());
  cuts.push_back(0.0);
  cuts.push_back(d.model().space().domain_length());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    // both densities are linear on (lo, hi); integrate |difference| exactly,
    // splitting at the sign change if there is one
    const auto value = [&](const DensitySlice& s, double x) {
      const LambdaPoint p = s.kind() == SpaceKind::UnitInterval
                                ? LambdaPoint::unit(x)
                                : LambdaPoint::circle(x);
      return s.value_at(p);
    };
    const double mid = 0.5 * (lo + hi);
    const double d_lo = value(alt, mid) - value(base, mid);
    // linear difference: slope from the piece masses is awkward to read back,
    // so evaluate at two interior points instead
    const double x1 = lo + 0.25 * (hi - lo);
    const double x2 = lo + 0.75 * (hi - lo);
    const double v1 = value(alt, x1) - value(base, x1);
    const double v2 = value(alt, x2) - value(base, x2);
    const double slope = (v2 - v1) / (x2 - x1);
    const double intercept = d_lo - slope * mid;
    const auto diff_at = [&](double x) { return intercept + slope * x; };
    const double f_lo = diff_at(lo), f_hi = diff_at(hi);
    if (f_lo * f_hi < 0.0 && slope != 0.0) {
      const double root = -intercept / slope;
      l1 += 0.5 * std::fabs(f_lo) * (root - lo) +
            0.5 * std::fabs(f_hi) * (hi - root);
    } else {
      // trapezoid of |linear| without sign change
      l1 += 0.5 * (std::fabs(f_lo) + std::fabs(f_hi)) * (hi - lo);
    }
  }
  return 0.5 * l1;
}

}  // namespace bellhv
