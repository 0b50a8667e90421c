#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bellhv/density.hpp"

namespace bellhv {

struct MonteCarloParams {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Evaluation strategy. Exact closed-form integration over the piecewise
// representation is the reference; Monte Carlo draws seeded samples in fixed
// blocks so results do not depend on the worker count.
struct Method {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  MonteCarloParams mc;

  static Method exact() { return {}; }
  static Method monte_carlo(std::uint64_t samples, std::uint64_t seed,
                            int workers = 1) {
    return {Kind::MonteCarlo, {samples, seed, workers}};
  }
};

struct ExpectationReport {
  double e_ab = 0.0;
  double e_a = 0.0;
  double e_b = 0.0;
  std::array<double, 4> joint{};  // (+,+), (+,-), (-,+), (-,-)
  Method::Kind method = Method::Kind::Exact;
  std::uint64_t n_samples = 0;            // Monte Carlo only
  double se_ab = 0.0, se_a = 0.0, se_b = 0.0;  // standard errors, Monte Carlo only
};

ExpectationReport expectations(const ConditionalDensity& d, Setting m_a,
                               Setting m_b, const Method& method = {});

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b')
double chsh(const ConditionalDensity& d, Setting a, Setting a_alt, Setting b,
            Setting b_alt, const Method& method = {});

// Marginal dependence of wing A on the distant setting:
// delta_a = E[A | M_A, M_B'] - E[A | M_A, M_B]. Nonzero delta_a signals in
// the operational sense only when the outcome indicators are also free of
// functional dependence on the distant setting; the locality audit checks
// that second condition separately.
struct ViolationReport {
  double delta_a = 0.0;
  double se_delta = 0.0;  // Monte Carlo only
  Setting m_a, m_b, m_b_alt;
  Method::Kind method = Method::Kind::Exact;
};

ViolationReport marginal_violation(const ConditionalDensity& d, Setting m_a,
                                   Setting m_b, Setting m_b_alt,
                                   const Method& method = {});

// Fine-tuning probe: how far the lambda-distribution drifts across setting
// mechanisms, at fixed settings. Magnitude is total-variation distance on the
// induced joint outcome distribution; max_tv is the maximum over mechanism
// pairs. A single density (or all densities of identical form) gives zero.
struct MechanismEntry {
  MechanismPair mechanism;
  std::array<double, 4> joint{};
};

struct MechanismDependenceReport {
  double max_tv = 0.0;
  std::vector<MechanismEntry> table;
  // one row per unordered density pair: indices into table plus the distance
  struct PairDistance {
    std::size_t first = 0, second = 0;
    double tv = 0.0;
  };
  std::vector<PairDistance> pairwise;
};

MechanismDependenceReport mechanism_dependence(
    std::span<const ConditionalDensity> densities, Setting m_a, Setting m_b,
    const Method& method = {});

}  // namespace bellhv
