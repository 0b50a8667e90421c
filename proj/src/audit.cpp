#include "bellhv/audit.hpp"

#include <algorithm>
#include <stdexcept>

namespace bellhv {

namespace {

std::vector<double> probe_coordinates(const HVModel& model,
                                      const SettingTriple& t,
                                      const ProbePlan& plan) {
  const double len = model.space().domain_length();
  std::vector<double> cuts;
  if (plan.include_outcome_pieces) {
    // region boundaries of every setting pair the audit touches, wings
    // exchanged included
    for (const auto& [x, y] : {std::pair{t.local, t.distant},
                               std::pair{t.local, t.distant_alt},
                               std::pair{t.distant, t.local},
                               std::pair{t.distant_alt, t.local}}) {
      const std::vector<double> c = model.outcome_breakpoints(x, y);
      cuts.insert(cuts.end(), c.begin(), c.end());
    }
  }
  cuts.push_back(0.0);
  cuts.push_back(len);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> points;
  if (plan.include_outcome_pieces) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) points.push_back(0.5 * (cuts[i] + cuts[i + 1]));
    }
  }
  for (int i = 0; i < plan.grid_points; ++i) {
    points.push_back(len * (i + 0.5) / plan.grid_points);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

AuditReport functional_locality_audit(const HVModel& model,
                                      std::span<const SettingTriple> grid,
                                      const ProbePlan& plan) {
  if (grid.empty()) {
    throw std::invalid_argument("audit needs at least one setting triple");
  }
  if (plan.grid_points <= 0 && !plan.include_outcome_pieces) {
    throw std::invalid_argument("probe plan selects no points");
  }
  const bool fourpoint = model.space().kind == SpaceKind::FourPoint;

  AuditReport rep;
  for (const SettingTriple& t : grid) {
    std::vector<LambdaPoint> probes;
    if (fourpoint) {
      for (int i = 0; i < 4; ++i) {
        const DiscretePair p = fourpoint_from_index(i);
        probes.push_back(LambdaPoint::pair(p.a_pre, p.b_pre));
      }
    } else {
      for (double x : probe_coordinates(model, t, plan)) {
        probes.push_back(model.space().kind == SpaceKind::UnitInterval
                             ? LambdaPoint::unit(x)
                             : LambdaPoint::circle(x));
      }
    }

    for (const LambdaPoint& lambda : probes) {
      ++rep.probes_evaluated;
      const Outcome a_before = model.outcome_A(lambda, t.local, t.distant);
      const Outcome a_after = model.outcome_A(lambda, t.local, t.distant_alt);
      if (a_before != a_after) {
        rep.witnesses.push_back(
            {lambda, 'A', t.local, t.distant, t.distant_alt, a_before, a_after});
      }
      const Outcome b_before = model.outcome_B(lambda, t.distant, t.local);
      const Outcome b_after = model.outcome_B(lambda, t.distant_alt, t.local);
      if (b_before != b_after) {
        rep.witnesses.push_back(
            {lambda, 'B', t.local, t.distant, t.distant_alt, b_before, b_after});
      }
    }
  }
  rep.passes_locality = rep.witnesses.empty();
  return rep;
}

}  // namespace bellhv
