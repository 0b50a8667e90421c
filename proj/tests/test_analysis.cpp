#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bellhv/analysis.hpp"
#include "bellhv/audit.hpp"
#include "bellhv/errors.hpp"

#include "test_util.hpp"

using namespace bellhv;
using testutil::expect_set_near;
using testutil::rand_in;

namespace {

const Setting kA(0.0), kB(kPi / 2), kBAlt(0.0);

ConditionalDensity ramp_nl() {
  return ConditionalDensity::weighted(make_model("nl-interval"),
                                      WeightSpec::linear_ramp());
}

ConditionalDensity skew_sd() {
  return ConditionalDensity::weighted(make_model("sd-brans"),
                                      WeightSpec::fourpoint({2, 1, 1, 1}));
}

// Riemann oracle for the half-L1 distance between the two conditionals.
double riemann_reshuffle(const ConditionalDensity& d, Setting a, Setting b,
                         Setting b_alt, int panels) {
  const double len = d.model().space().domain_length();
  const double h = len / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x = (i + 0.5) * h;
    const LambdaPoint lam = d.model().space().kind == SpaceKind::UnitInterval
                                ? LambdaPoint::unit(x)
                                : LambdaPoint::circle(x);
    acc += std::abs(d.density_at(lam, a, b_alt) - d.density_at(lam, a, b)) * h;
  }
  return 0.5 * acc;
}

}  // namespace

TEST_CASE("support tracks the positive-density region") {
  const auto d = ConditionalDensity::weighted(make_model("nl-interval"),
                                             WeightSpec::bins({0.0, 2.0}));
  expect_set_near(
      support(d, Setting(0.1), Setting(1.0)),
      MeasurableSubset::from_intervals(SpaceKind::UnitInterval, {{0.5, 1.0}}));
  // union over both distant settings; settings-independent here
  expect_set_near(
      support(d, Setting(0.1), Setting(1.0), Setting(2.0)),
      MeasurableSubset::from_intervals(SpaceKind::UnitInterval, {{0.5, 1.0}}));

  const auto sd = skew_sd();
  // at coincident settings equilibrium kills the correlated points
  CHECK(support(sd, Setting(0.0), Setting(0.0)).point_mask() == 0b0110);
  // union with a generic second setting restores all four
  CHECK(support(sd, Setting(0.0), Setting(0.0), Setting(kPi / 2)).point_mask() ==
        0b1111);
}

TEST_CASE("partition splits the support by the sign wing A reports") {
  const auto d = ramp_nl();
  const PartitionReport rep = partition(d, kA, kB, kBAlt);
  expect_set_near(rep.s_a_plus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.0, 0.25}, {0.5, 0.75}}));
  expect_set_near(rep.s_a_minus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.25, 0.5}, {0.75, 1.0}}));
  expect_set_near(rep.s_alt_a_plus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.5, 1.0}}));
  expect_set_near(rep.s_alt_a_minus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.0, 0.5}}));
  // plus and minus halves tile the support exactly
  CHECK(rep.s_a_plus.unite(rep.s_a_minus) == rep.s);
  CHECK(rep.s_a_plus.intersect(rep.s_a_minus).is_empty());
  CHECK(rep.s_alt_a_plus.unite(rep.s_alt_a_minus) == rep.s);
}

TEST_CASE("superdeterministic partitions are distant-setting invariant") {
  std::mt19937_64 rng(61);
  for (const char* id : {"sd-brans", "sd-arc"}) {
    const auto d = equilibrium_for(id);
    for (int trial = 0; trial < 40; ++trial) {
      const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
          b_alt(rand_in(rng, 0.0, kTwoPi));
      const PartitionReport rep = partition(d, a, b, b_alt);
      // same indicator, same support: primed halves coincide structurally
      CHECK(rep.s_a_plus == rep.s_alt_a_plus);
      CHECK(rep.s_a_minus == rep.s_alt_a_minus);
    }
  }
}

TEST_CASE("transition sets isolate the flip regions") {
  const auto d = ramp_nl();
  const TransitionReport rep = transitions(d, kA, kB, kBAlt);
  CHECK(rep.family == CausalFamily::NonlocalDeterministic);
  expect_set_near(rep.t_plus_minus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.0, 0.25}}));
  expect_set_near(rep.t_minus_plus,
                  MeasurableSubset::from_intervals(SpaceKind::UnitInterval,
                                                   {{0.75, 1.0}}));
  CHECK(rep.measure_plus_minus == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(rep.measure_minus_plus == doctest::Approx(7.0 / 16).epsilon(1e-12));
  CHECK(detailed_balance_residual(d, rep) ==
        doctest::Approx(-3.0 / 8).epsilon(1e-12));
}

TEST_CASE("transition sets of superdeterministic models are empty") {
  std::mt19937_64 rng(62);
  for (const char* id : {"sd-brans", "sd-arc"}) {
    const auto d = equilibrium_for(id);
    for (int trial = 0; trial < 40; ++trial) {
      const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
          b_alt(rand_in(rng, 0.0, kTwoPi));
      const TransitionReport rep = transitions(d, a, b, b_alt);
      CHECK(rep.t_plus_minus.is_empty());
      CHECK(rep.t_minus_plus.is_empty());
      CHECK(rep.measure_plus_minus == 0.0);
      CHECK(rep.measure_minus_plus == 0.0);
      CHECK_THROWS_AS(detailed_balance_residual(d, rep), NotApplicableError);
    }
  }
}

TEST_CASE("equilibrium transition measures balance exactly") {
  std::mt19937_64 rng(63);
  const auto d = equilibrium_for("nl-interval");
  for (int trial = 0; trial < 100; ++trial) {
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
        b_alt(rand_in(rng, 0.0, kTwoPi));
    const TransitionReport rep = transitions(d, a, b, b_alt);
    CHECK(std::abs(detailed_balance_residual(d, rep)) <= 1e-12);
  }
}

TEST_CASE("nonlocal marginal shift agrees across all three routes") {
  const auto d = ramp_nl();
  const NonlocalShift sh = marginal_shift_nonlocal(d, kA, kB, kBAlt);
  CHECK(sh.via_transitions == doctest::Approx(3.0 / 8).epsilon(1e-12));
  CHECK(sh.via_supports == doctest::Approx(3.0 / 8).epsilon(1e-12));
  // direct statistics: P(A=+) moves 3/8 -> 3/4
  const ExpectationReport base = expectations(d, kA, kB);
  const ExpectationReport alt = expectations(d, kA, kBAlt);
  CHECK(base.joint[0] + base.joint[1] ==
        doctest::Approx(3.0 / 8).epsilon(1e-12));
  CHECK(alt.joint[0] + alt.joint[1] ==
        doctest::Approx(3.0 / 4).epsilon(1e-12));
  CHECK(alt.joint[0] + alt.joint[1] - base.joint[0] - base.joint[1] ==
        doctest::Approx(sh.via_supports).epsilon(1e-12));
}

TEST_CASE("shift routes agree for random nonequilibrium weights") {
  std::mt19937_64 rng(64);
  const auto model = make_model("nl-interval");
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<double> h(2 + rng() % 5);
    for (double& v : h) v = rand_in(rng, 0.0, 3.0);
    h[0] = std::max(h[0], 0.1);
    const auto d = ConditionalDensity::weighted(model, WeightSpec::bins(h));
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
        b_alt(rand_in(rng, 0.0, kTwoPi));
    const NonlocalShift sh = marginal_shift_nonlocal(d, a, b, b_alt);
    CHECK(sh.via_transitions ==
          doctest::Approx(sh.via_supports).epsilon(1e-12));
    const ViolationReport delta = marginal_violation(d, a, b, b_alt);
    CHECK(delta.delta_a ==
          doctest::Approx(2.0 * sh.via_supports).epsilon(1e-11));
  }
}

TEST_CASE("family gates on the shift computations") {
  const auto sd = skew_sd();
  const auto nl = ramp_nl();
  CHECK_THROWS_AS(marginal_shift_nonlocal(sd, kA, kB, kBAlt),
                  NotApplicableError);
  CHECK_THROWS_AS(marginal_shift_sd(nl, kA, kB, kBAlt), NotApplicableError);
}

TEST_CASE("fixed-partition marginal shift matches the worked example") {
  const auto d = skew_sd();
  CHECK(marginal_shift_sd(d, kA, kB, kBAlt) ==
        doctest::Approx(-0.1).epsilon(1e-12));
  // delta on the expectation scale is twice the probability shift
  const ViolationReport delta = marginal_violation(d, kA, kB, kBAlt);
  CHECK(delta.delta_a == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("probability shift halves the expectation delta for any sd weight") {
  std::mt19937_64 rng(65);
  const auto model = make_model("sd-brans");
  for (int trial = 0; trial < 80; ++trial) {
    std::array<double, 4> w{};
    for (double& v : w) v = rand_in(rng, 0.05, 4.0);
    const auto d =
        ConditionalDensity::weighted(model, WeightSpec::fourpoint(w));
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
        b_alt(rand_in(rng, 0.0, kTwoPi));
    const double shift = marginal_shift_sd(d, a, b, b_alt);
    const double delta = marginal_violation(d, a, b, b_alt).delta_a;
    CHECK(delta == doctest::Approx(2.0 * shift).epsilon(1e-12));
  }
}

TEST_CASE("reshuffle mass matches the worked example and a quadrature oracle") {
  const auto d = skew_sd();
  CHECK(reshuffle_mass(d, kA, kB, kBAlt) == doctest::Approx(0.6).epsilon(1e-12));
  // nonlocal-deterministic conditionals are settings-independent
  const auto nl = ramp_nl();
  CHECK(reshuffle_mass(nl, kA, kB, kBAlt) <= 1e-15);

  std::mt19937_64 rng(66);
  const auto arc = make_model("sd-arc");
  for (int trial = 0; trial < 6; ++trial) {
    const auto w = ConditionalDensity::weighted(
        arc, WeightSpec::arcs({{0.0, 1.5, 3.0, 4.5}, {0.2, 2.0, 1.0, 0.6}}));
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
        b_alt(rand_in(rng, 0.0, kTwoPi));
    const double got = reshuffle_mass(w, a, b, b_alt);
    const double want = riemann_reshuffle(w, a, b, b_alt, 300000);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0 + 1e-12);
    // order of the two settings cannot matter
    CHECK(reshuffle_mass(w, a, b_alt, b) == doctest::Approx(got).epsilon(1e-13));
  }
}

TEST_CASE("locality audit clears superdeterministic indicators") {
  std::mt19937_64 rng(71);
  for (const char* id : {"sd-brans", "sd-arc"}) {
    const auto m = make_model(id);
    std::vector<SettingTriple> triples;
    for (int i = 0; i < 25; ++i) {
      triples.push_back({Setting(rand_in(rng, 0.0, kTwoPi)),
                         Setting(rand_in(rng, 0.0, kTwoPi)),
                         Setting(rand_in(rng, 0.0, kTwoPi))});
    }
    const AuditReport rep = functional_locality_audit(*m, triples);
    CHECK(rep.passes_locality);
    CHECK(rep.witnesses.empty());
    CHECK(rep.probes_evaluated > 0);
  }
}

TEST_CASE("locality audit catches the nonlocal indicator with witnesses") {
  const auto m = make_model("nl-interval");
  const std::vector<SettingTriple> triples = {
      {Setting(0.0), Setting(kPi / 2), Setting(0.0)}};
  const AuditReport rep = functional_locality_audit(*m, triples);
  CHECK_FALSE(rep.passes_locality);
  REQUIRE_FALSE(rep.witnesses.empty());
  for (const LocalityWitness& w : rep.witnesses) {
    // every witness replays to a genuine flip
    const Outcome before =
        w.wing == 'A' ? m->outcome_A(w.lambda, w.local, w.distant)
                      : m->outcome_B(w.lambda, w.distant, w.local);
    const Outcome after =
        w.wing == 'A' ? m->outcome_A(w.lambda, w.local, w.distant_alt)
                      : m->outcome_B(w.lambda, w.distant_alt, w.local);
    CHECK(before == w.before);
    CHECK(after == w.after);
    CHECK(before != after);
  }
  // the A-wing flip region for this triple is [0, 1/4) plus [3/4, 1)
  bool found_low = false, found_high = false;
  for (const LocalityWitness& w : rep.witnesses) {
    if (w.wing != 'A') continue;
    const double x = w.lambda.coordinate();
    found_low = found_low || x < 0.25;
    found_high = found_high || x >= 0.75;
  }
  CHECK(found_low);
  CHECK(found_high);
}

TEST_CASE("audit probe plan validation") {
  const auto m = make_model("sd-brans");
  const std::vector<SettingTriple> triples = {
      {Setting(0.0), Setting(1.0), Setting(2.0)}};
  CHECK_THROWS_AS(
      functional_locality_audit(*m, {}, ProbePlan{}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      functional_locality_audit(*m, triples, ProbePlan{0, false}),
      std::invalid_argument);
  // four-point space probes all points even without a grid
  const AuditReport rep =
      functional_locality_audit(*m, triples, ProbePlan{0, true});
  CHECK(rep.probes_evaluated == 4);
}

TEST_CASE("reshuffle vanishes when the distant setting does not move") {
  std::mt19937_64 rng(67);
  for (const char* id : {"sd-brans", "sd-arc", "nl-interval"}) {
    const auto d = equilibrium_for(id);
    for (int trial = 0; trial < 30; ++trial) {
      const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi));
      CHECK(reshuffle_mass(d, a, b, b) <= 1e-15);
    }
  }
}

TEST_CASE("equilibrium reshuffles without moving the marginal") {
  // the conditional genuinely changes with the distant setting, yet the
  // plus-region mass is conserved; this is the balanced case
  const auto d = equilibrium_for("sd-brans");
  std::mt19937_64 rng(68);
  for (int trial = 0; trial < 40; ++trial) {
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
        b_alt(rand_in(rng, 0.0, kTwoPi));
    // closed form: all four point masses move by |c - c'|/4
    const double want =
        0.5 * std::abs(cos_separation(a, b) - cos_separation(a, b_alt));
    CHECK(reshuffle_mass(d, a, b, b_alt) ==
          doctest::Approx(want).epsilon(1e-12));
    CHECK(std::abs(marginal_shift_sd(d, a, b, b_alt)) <= 1e-12);
  }
}
