#pragma once

#include "bellhv/density.hpp"
#include "bellhv/sets.hpp"
#include "bellhv/statistics.hpp"

namespace bellhv {

// Support of rho(.|M_A, M_B): region of strictly positive density.
MeasurableSubset support(const ConditionalDensity& d, Setting m_a, Setting m_b);

// Union of the supports at both B settings. For superdeterministic densities
// the conditionals genuinely differ, so the union is the right common ground
// for comparing them; nonlocal-deterministic densities are settings-
// independent and the union degenerates to the single support.
MeasurableSubset support(const ConditionalDensity& d, Setting m_a, Setting m_b,
                         Setting m_b_alt);

// S split by the sign wing A reports, under M_B (unprimed) and under M_B'
// (primed). For superdeterministic models the indicator never reads the
// distant setting, so primed and unprimed halves coincide structurally.
struct PartitionReport {
  MeasurableSubset s = MeasurableSubset::empty(SpaceKind::FourPoint);
  MeasurableSubset s_a_plus = MeasurableSubset::empty(SpaceKind::FourPoint);
  MeasurableSubset s_a_minus = MeasurableSubset::empty(SpaceKind::FourPoint);
  MeasurableSubset s_alt_a_plus = MeasurableSubset::empty(SpaceKind::FourPoint);
  MeasurableSubset s_alt_a_minus = MeasurableSubset::empty(SpaceKind::FourPoint);
  Setting m_a, m_b, m_b_alt;
};

PartitionReport partition(const ConditionalDensity& d, Setting m_a, Setting m_b,
                          Setting m_b_alt);

// Regions whose A-outcome flips when M_B moves to M_B':
// t_plus_minus = S_A+ intersect S'_A-, t_minus_plus = S_A- intersect S'_A+.
// Superdeterministic models have none; their distribution change is a
// reshuffle of weight over a fixed partition instead.
struct TransitionReport {
  MeasurableSubset t_plus_minus = MeasurableSubset::empty(SpaceKind::FourPoint);
  MeasurableSubset t_minus_plus = MeasurableSubset::empty(SpaceKind::FourPoint);
  double measure_plus_minus = 0.0;  // rho-mass of t_plus_minus
  double measure_minus_plus = 0.0;  // rho-mass of t_minus_plus
  Setting m_a, m_b, m_b_alt;
  CausalFamily family = CausalFamily::Superdeterministic;
};

TransitionReport transitions(const ConditionalDensity& d, Setting m_a,
                             Setting m_b, Setting m_b_alt);

// Detailed balancing gap: rho-mass(T(+,-)) - rho-mass(T(-,+)). Zero keeps the
// A marginal independent of M_B. Only meaningful where transition sets exist;
// superdeterministic input raises NotApplicableError.
double detailed_balance_residual(const ConditionalDensity& d,
                                 const TransitionReport& t);

// Change of P(A=+) under M_B -> M_B' for nonlocal-deterministic models,
// computed two independent ways that agree identically:
//   via_transitions: mass(T(-,+)) - mass(T(+,-))
//   via_supports:    mass(S'_A+) - mass(S_A+)
struct NonlocalShift {
  double via_transitions = 0.0;
  double via_supports = 0.0;
};

NonlocalShift marginal_shift_nonlocal(const ConditionalDensity& d, Setting m_a,
                                      Setting m_b, Setting m_b_alt);

// Change of P(A=+) for superdeterministic models: same region S_A+, two
// conditionals. Returns rho(.|M_A,M_B')-mass minus rho(.|M_A,M_B)-mass of
// S_A+. Nonlocal-deterministic input raises NotApplicableError.
double marginal_shift_sd(const ConditionalDensity& d, Setting m_a, Setting m_b,
                         Setting m_b_alt);

// How much probability weight the distribution change moves around:
// (1/2) * L1 distance between the two conditionals. This is the reshuffle
// diagnostic for superdeterministic models; for nonlocal-deterministic
// densities the two conditionals coincide and it is zero.
double reshuffle_mass(const ConditionalDensity& d, Setting m_a, Setting m_b,
                      Setting m_b_alt);

}  // namespace bellhv
