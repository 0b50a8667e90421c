#pragma once

#include <span>
#include <vector>

#include "bellhv/model.hpp"

namespace bellhv {

// One audited configuration: the probed wing keeps `local`, the distant wing
// swings from `distant` to `distant_alt`. Each triple is applied to wing A
// directly and to wing B with the wings exchanged (B probed at
// M_B = local while M_A swings distant -> distant_alt).
struct SettingTriple {
  Setting local, distant, distant_alt;
};

// Where to evaluate the indicators. Piece midpoints cover every constant-
// outcome region of every referenced setting pair at least once; the uniform
// grid adds interior points. The four-point space is always probed
// exhaustively. A plan selecting nothing is an invalid (empty) probe.
struct ProbePlan {
  int grid_points = 64;
  bool include_outcome_pieces = true;
};

struct LocalityWitness {
  LambdaPoint lambda = LambdaPoint::pair(Outcome::Plus, Outcome::Plus);
  char wing = 'A';  // which wing's outcome flipped
  Setting local, distant, distant_alt;
  Outcome before = Outcome::Plus;  // at (local, distant)
  Outcome after = Outcome::Plus;   // at (local, distant_alt)
};

struct AuditReport {
  bool passes_locality = true;
  std::vector<LocalityWitness> witnesses;
  std::size_t probes_evaluated = 0;
};

// Checks that no probed hidden variable changes its outcome under a swing of
// the distant setting. Superdeterministic indicators never read the distant
// setting, so they pass by construction; a failure always comes with explicit
// witnesses.
AuditReport functional_locality_audit(const HVModel& model,
                                      std::span<const SettingTriple> grid,
                                      const ProbePlan& plan = {});

}  // namespace bellhv
