#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bellhv/statistics.hpp"

#include "test_util.hpp"

using namespace bellhv;
using testutil::rand_in;

namespace {

// Independent oracle: Riemann midpoint quadrature of outcome indicators
// against density values, no use of the piecewise machinery.
ExpectationReport riemann_expectations(const ConditionalDensity& d, Setting a,
                                       Setting b, int panels) {
  const HVModel& m = d.model();
  ExpectationReport rep;
  if (m.space().kind == SpaceKind::FourPoint) {
    for (int i = 0; i < 4; ++i) {
      const DiscretePair p = fourpoint_from_index(i);
      const LambdaPoint lam = LambdaPoint::pair(p.a_pre, p.b_pre);
      const double w = d.density_at(lam, a, b);
      const int sa = sign(m.outcome_A(lam, a, b));
      const int sb = sign(m.outcome_B(lam, a, b));
      rep.joint[(sa > 0 ? 0 : 2) + (sb > 0 ? 0 : 1)] += w;
      rep.e_ab += w * sa * sb;
      rep.e_a += w * sa;
      rep.e_b += w * sb;
    }
    return rep;
  }
  const double len = m.space().domain_length();
  const double h = len / panels;
  for (int i = 0; i < panels; ++i) {
    const double x = (i + 0.5) * h;
    const LambdaPoint lam = m.space().kind == SpaceKind::UnitInterval
                                ? LambdaPoint::unit(x)
                                : LambdaPoint::circle(x);
    const double w = d.density_at(lam, a, b) * h;
    const int sa = sign(m.outcome_A(lam, a, b));
    const int sb = sign(m.outcome_B(lam, a, b));
    rep.joint[(sa > 0 ? 0 : 2) + (sb > 0 ? 0 : 1)] += w;
    rep.e_ab += w * sa * sb;
    rep.e_a += w * sa;
    rep.e_b += w * sb;
  }
  return rep;
}

}  // namespace

TEST_CASE("equilibrium reproduces the singlet correlator for every model") {
  for (const char* id : {"sd-brans", "sd-arc", "nl-interval"}) {
    const auto d = equilibrium_for(id);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const Setting a(kTwoPi * i / 8), b(kTwoPi * j / 8);
        const ExpectationReport rep = expectations(d, a, b);
        CHECK(std::abs(rep.e_ab + cos_separation(a, b)) <= 1e-9);
        CHECK(std::abs(rep.e_a) <= 1e-9);
        CHECK(std::abs(rep.e_b) <= 1e-9);
        double total = 0.0;
        for (double p : rep.joint) {
          CHECK(p >= 0.0);
          total += p;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exact expectations agree with four-point enumeration") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 4> w{};
    for (double& v : w) v = rand_in(rng, 0.05, 4.0);
    const auto d = ConditionalDensity::weighted(make_model("sd-brans"),
                                               WeightSpec::fourpoint(w));
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi));
    const ExpectationReport got = expectations(d, a, b);
    const ExpectationReport want = riemann_expectations(d, a, b, 0);
    CHECK(got.e_ab == doctest::Approx(want.e_ab).epsilon(1e-12));
    CHECK(got.e_a == doctest::Approx(want.e_a).epsilon(1e-12));
    CHECK(got.e_b == doctest::Approx(want.e_b).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) {
      CHECK(got.joint[i] == doctest::Approx(want.joint[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact expectations agree with quadrature on segment spaces") {
  std::mt19937_64 rng(52);
  for (const char* id : {"sd-arc", "nl-interval"}) {
    const auto model = make_model(id);
    for (int trial = 0; trial < 10; ++trial) {
      const auto d =
          trial % 2 == 0
              ? ConditionalDensity::equilibrium(model)
              : ConditionalDensity::weighted(
                    model, model->space().kind == SpaceKind::UnitInterval
                               ? WeightSpec::bins({0.5, 2.0, 1.0})
                               : WeightSpec::arcs({{0.0, 2.0, 4.0},
                                                   {0.5, 2.0, 1.0}}));
      const Setting a(rand_in(rng, 0.0, kTwoPi)),
          b(rand_in(rng, 0.0, kTwoPi));
      const ExpectationReport got = expectations(d, a, b);
      const ExpectationReport want = riemann_expectations(d, a, b, 400000);
      // quadrature is exact except at the few boundary panels
      CHECK(got.e_ab == doctest::Approx(want.e_ab).epsilon(5e-4));
      CHECK(got.e_a == doctest::Approx(want.e_a).epsilon(5e-4));
      CHECK(got.e_b == doctest::Approx(want.e_b).epsilon(5e-4));
    }
  }
}

TEST_CASE("monte carlo estimates agree with exact values within 4 sigma") {
  std::mt19937_64 rng(53);
  int far = 0;
  for (const char* id : {"sd-brans", "sd-arc", "nl-interval"}) {
    const auto d = equilibrium_for(id);
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi));
    const ExpectationReport exact = expectations(d, a, b);
    const ExpectationReport mc =
        expectations(d, a, b, Method::monte_carlo(200000, 77));
    CHECK(mc.method == Method::Kind::MonteCarlo);
    CHECK(mc.n_samples == 200000);
    CHECK(mc.se_ab > 0.0);
    if (std::abs(mc.e_ab - exact.e_ab) > 4 * mc.se_ab) ++far;
    if (std::abs(mc.e_a - exact.e_a) > 4 * mc.se_a) ++far;
    if (std::abs(mc.e_b - exact.e_b) > 4 * mc.se_b) ++far;
  }
  CHECK(far == 0);
}

TEST_CASE("monte carlo results are identical for any worker count") {
  const auto d = equilibrium_for("sd-arc");
  const Setting a(0.4), b(2.0);
  const ExpectationReport w1 =
      expectations(d, a, b, Method::monte_carlo(300000, 12345, 1));
  const ExpectationReport w3 =
      expectations(d, a, b, Method::monte_carlo(300000, 12345, 3));
  const ExpectationReport w8 =
      expectations(d, a, b, Method::monte_carlo(300000, 12345, 8));
  CHECK(w1.e_ab == w3.e_ab);
  CHECK(w3.e_ab == w8.e_ab);
  for (int i = 0; i < 4; ++i) {
    CHECK(w1.joint[i] == w3.joint[i]);
    CHECK(w3.joint[i] == w8.joint[i]);
  }
  // different seeds genuinely differ
  const ExpectationReport other =
      expectations(d, a, b, Method::monte_carlo(300000, 12346, 1));
  CHECK(w1.e_ab != other.e_ab);
}

TEST_CASE("block splitting does not depend on sample-count remainders") {
  // sample counts straddling the block size give self-consistent prefixes
  const auto d = equilibrium_for("sd-brans");
  const Setting a(0.0), b(1.0);
  const auto r1 = expectations(d, a, b, Method::monte_carlo(65536 + 1000, 9));
  const auto r2 = expectations(d, a, b, Method::monte_carlo(65536 + 1000, 9, 4));
  CHECK(r1.e_ab == r2.e_ab);
  CHECK(r1.n_samples == 65536 + 1000);
}

TEST_CASE("chsh reaches the singlet bound at the optimal angles") {
  for (const char* id : {"sd-brans", "sd-arc", "nl-interval"}) {
    const auto d = equilibrium_for(id);
    const double s = chsh(d, Setting(0.0), Setting(kPi / 2), Setting(kPi / 4),
                          Setting(3 * kPi / 4));
    CHECK(std::abs(std::abs(s) - 2.0 * std::sqrt(2.0)) <= 1e-6);
  }
}

TEST_CASE("chsh monte carlo stays near the exact combination") {
  const auto d = equilibrium_for("nl-interval");
  const Setting a(0.0), a_alt(kPi / 2), b(kPi / 4), b_alt(3 * kPi / 4);
  const double exact = chsh(d, a, a_alt, b, b_alt);
  const double mc =
      chsh(d, a, a_alt, b, b_alt, Method::monte_carlo(200000, 31));
  // each term's se is at most 1/sqrt(n); allow 4 sigma on the sum
  CHECK(std::abs(mc - exact) <= 4 * 2.0 / std::sqrt(200000.0));
}

TEST_CASE("equilibrium marginals ignore the distant setting") {
  std::mt19937_64 rng(54);
  for (const char* id : {"sd-brans", "sd-arc", "nl-interval"}) {
    const auto d = equilibrium_for(id);
    for (int trial = 0; trial < 50; ++trial) {
      const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi)),
          b_alt(rand_in(rng, 0.0, kTwoPi));
      const ViolationReport rep = marginal_violation(d, a, b, b_alt);
      CHECK(std::abs(rep.delta_a) <= 1e-12);
    }
  }
}

TEST_CASE("nonequilibrium marginals move with the distant setting") {
  const auto d = ConditionalDensity::weighted(make_model("nl-interval"),
                                             WeightSpec::linear_ramp());
  const ViolationReport rep =
      marginal_violation(d, Setting(0.0), Setting(kPi / 2), Setting(0.0));
  CHECK(rep.delta_a == doctest::Approx(0.75).epsilon(1e-12));
  const auto sd = ConditionalDensity::weighted(make_model("sd-brans"),
                                              WeightSpec::fourpoint({2, 1, 1, 1}));
  const ViolationReport rep2 =
      marginal_violation(sd, Setting(0.0), Setting(kPi / 2), Setting(0.0));
  CHECK(rep2.delta_a == doctest::Approx(-0.2).epsilon(1e-12));
  // monte carlo road agrees within its own error bar
  const ViolationReport mc = marginal_violation(
      sd, Setting(0.0), Setting(kPi / 2), Setting(0.0),
      Method::monte_carlo(200000, 91));
  CHECK(std::abs(mc.delta_a - rep2.delta_a) <= 4 * mc.se_delta);
}

TEST_CASE("mechanism dependence measures distribution drift") {
  const auto model = make_model("sd-brans");
  std::vector<ConditionalDensity> ds;
  ds.push_back(ConditionalDensity::weighted(
      model, WeightSpec::fourpoint({2, 1, 1, 1}), MechanismPair{1, 1}));
  ds.push_back(ConditionalDensity::weighted(
      model, WeightSpec::fourpoint({1, 1, 1, 1}), MechanismPair{2, 1}));
  const MechanismDependenceReport rep =
      mechanism_dependence(ds, Setting(0.0), Setting(kPi / 2));
  CHECK(rep.max_tv == doctest::Approx(0.15).epsilon(1e-12));
  REQUIRE(rep.table.size() == 2);
  REQUIRE(rep.pairwise.size() == 1);
  CHECK(rep.pairwise[0].tv == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(rep.table[0].mechanism.i == 1);
  CHECK(rep.table[1].mechanism.i == 2);

  // all-equilibrium mechanisms cannot drift
  std::vector<ConditionalDensity> eqs;
  eqs.push_back(ConditionalDensity::equilibrium(model, MechanismPair{1, 1}));
  eqs.push_back(ConditionalDensity::equilibrium(model, MechanismPair{2, 2}));
  eqs.push_back(ConditionalDensity::equilibrium(model, MechanismPair{3, 1}));
  const MechanismDependenceReport flat =
      mechanism_dependence(eqs, Setting(0.7), Setting(2.9));
  CHECK(flat.max_tv <= 1e-15);
  CHECK(flat.pairwise.size() == 3);

  // single density: nothing to compare
  std::vector<ConditionalDensity> one;
  one.push_back(ConditionalDensity::equilibrium(model));
  CHECK(mechanism_dependence(one, Setting(0), Setting(1)).max_tv == 0.0);

  // invalid inputs
  std::vector<ConditionalDensity> none;
  CHECK_THROWS_AS(mechanism_dependence(none, Setting(0), Setting(1)),
                  std::invalid_argument);
  std::vector<ConditionalDensity> mixed;
  mixed.push_back(ConditionalDensity::equilibrium(model));
  mixed.push_back(equilibrium_for("sd-arc"));
  CHECK_THROWS_AS(mechanism_dependence(mixed, Setting(0), Setting(1)),
                  std::invalid_argument);
}

TEST_CASE("tv distance is symmetric and bounded by one") {
  std::mt19937_64 rng(55);
  const auto model = make_model("sd-brans");
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 4> w1{}, w2{};
    for (double& v : w1) v = rand_in(rng, 0.05, 3.0);
    for (double& v : w2) v = rand_in(rng, 0.05, 3.0);
    std::vector<ConditionalDensity> ds;
    ds.push_back(ConditionalDensity::weighted(model, WeightSpec::fourpoint(w1),
                                              MechanismPair{1, 1}));
    ds.push_back(ConditionalDensity::weighted(model, WeightSpec::fourpoint(w2),
                                              MechanismPair{2, 1}));
    const Setting a(rand_in(rng, 0.0, kTwoPi)), b(rand_in(rng, 0.0, kTwoPi));
    const auto rep = mechanism_dependence(ds, a, b);
    CHECK(rep.max_tv >= 0.0);
    CHECK(rep.max_tv <= 1.0 + 1e-15);
    std::vector<ConditionalDensity> swapped = {ds[1], ds[0]};
    CHECK(mechanism_dependence(swapped, a, b).max_tv ==
          doctest::Approx(rep.max_tv).epsilon(1e-15));
  }
}
