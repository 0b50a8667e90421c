#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellhv/errors.hpp"
#include "bellhv/telephone.hpp"

#include "test_util.hpp"

using namespace bellhv;

namespace {

ChannelConfig skew_channel(std::uint64_t seed, std::uint64_t pairs_per_bit,
                           bool record_pairs = true) {
  const auto model = make_model("sd-brans");
  return ChannelConfig{model,
                       ConditionalDensity::weighted(
                           model, WeightSpec::fourpoint({2, 1, 1, 1})),
                       Setting(0.0),
                       Setting(kPi / 2),
                       Setting(0.0),
                       pairs_per_bit,
                       0.55,
                       seed,
                       false,
                       record_pairs};
}

std::vector<int> alternating_bits(std::size_t n) {
  std::vector<int> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<int>(i % 2);
  return bits;
}

}  // namespace

TEST_CASE("channel validation") {
  CHECK_NOTHROW(skew_channel(1, 100).validate());

  // equilibrium marginals cannot carry a message
  const auto model = make_model("sd-brans");
  const ChannelConfig flat{model,
                           ConditionalDensity::equilibrium(model),
                           Setting(0.0),
                           Setting(kPi / 2),
                           Setting(0.0),
                           100,
                           0.55,
                           1,
                           false,
                           true};
  CHECK_THROWS_AS(flat.validate(), ChannelError);

  // threshold outside the open marginal interval
  ChannelConfig bad_threshold = skew_channel(1, 100);
  bad_threshold.decision_threshold = 0.7;
  CHECK_THROWS_AS(bad_threshold.validate(), ChannelError);
  bad_threshold.decision_threshold = 0.5;  // endpoint, still invalid
  CHECK_THROWS_AS(bad_threshold.validate(), ChannelError);

  ChannelConfig no_pairs = skew_channel(1, 0);
  CHECK_THROWS_AS(no_pairs.validate(), std::invalid_argument);

  // nonlocal model needs the explicit diagnostic switch
  const auto nl = make_model("nl-interval");
  ChannelConfig nl_channel{nl,
                           ConditionalDensity::weighted(
                               nl, WeightSpec::linear_ramp()),
                           Setting(0.0),
                           Setting(kPi / 2),
                           Setting(0.0),
                           100,
                           0.5,
                           1,
                           false,
                           true};
  CHECK_THROWS_AS(nl_channel.validate(), std::invalid_argument);
  nl_channel.nonlocal_diagnostic = true;
  CHECK_NOTHROW(nl_channel.validate());

  // density from a different model
  ChannelConfig mismatched = skew_channel(1, 100);
  mismatched.density = ConditionalDensity::weighted(make_model("nl-interval"),
                                                    WeightSpec::linear_ramp());
  CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);
}

TEST_CASE("exact marginals match the hand-computed channel") {
  const ChannelConfig ch = skew_channel(1, 100);
  CHECK(ch.exact_marginal_plus(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(ch.exact_marginal_plus(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("transmission is deterministic per seed and bit-indexed") {
  const std::vector<int> bits = alternating_bits(40);
  const TransmissionLog log1 = transmit(skew_channel(11, 500), bits);
  const TransmissionLog log2 = transmit(skew_channel(11, 500), bits);
  REQUIRE(log1.bits.size() == bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    CHECK(log1.bits[i].sent == bits[i]);
    CHECK(log1.bits[i].n_plus == log2.bits[i].n_plus);
    CHECK(log1.bits[i].p_hat ==
          doctest::Approx(double(log1.bits[i].n_plus) / 500).epsilon(1e-15));
  }
  CHECK(log1.pair_lambdas == log2.pair_lambdas);
  // a different master seed changes the draws
  const TransmissionLog other = transmit(skew_channel(12, 500), bits);
  bool any_diff = false;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    any_diff = any_diff || other.bits[i].n_plus != log1.bits[i].n_plus;
  }
  CHECK(any_diff);
  // per-bit substreams: a shared prefix is unchanged by later bits
  const TransmissionLog prefix =
      transmit(skew_channel(11, 500), alternating_bits(10));
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(prefix.bits[i].n_plus == log1.bits[i].n_plus);
  }
}

TEST_CASE("recorded pairs reproduce the logged counts") {
  const ChannelConfig ch = skew_channel(21, 250);
  const std::vector<int> bits = alternating_bits(30);
  const TransmissionLog log = transmit(ch, bits);
  REQUIRE(log.pair_lambdas.size() == bits.size() * 250);
  REQUIRE(log.pair_outcomes.size() == bits.size() * 250);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    std::uint64_t n_plus = 0;
    for (std::size_t p = 0; p < 250; ++p) {
      const auto idx = k * 250 + p;
      const LambdaPoint lam =
          lambda_from_code(SpaceKind::FourPoint, log.pair_lambdas[idx]);
      const Setting b = bits[k] == 1 ? ch.bit1_setting : ch.bit0_setting;
      const Outcome a = ch.model->outcome_A(lam, ch.m_a, b);
      CHECK(sign(a) == log.pair_outcomes[idx]);
      n_plus += a == Outcome::Plus ? 1 : 0;
    }
    CHECK(n_plus == log.bits[k].n_plus);
  }
}

TEST_CASE("error rate counts decode failures") {
  TransmissionLog log;
  log.pairs_per_bit = 10;
  log.bits = {{0, 0, 0, 0.0}, {1, 1, 0, 0.0}, {1, 0, 0, 0.0}, {0, 1, 0, 0.0}};
  CHECK(log.error_count() == 2);
  CHECK(log.bit_error_rate() == doctest::Approx(0.5));
  log.bits.clear();
  CHECK(log.bit_error_rate() == 0.0);
}

TEST_CASE("more pairs per bit decode more reliably") {
  const std::vector<int> bits = alternating_bits(400);
  const TransmissionLog coarse = transmit(skew_channel(31, 10), bits);
  const TransmissionLog fine = transmit(skew_channel(31, 2000), bits);
  // gap 0.1 at N=10 misreads a third of the time; at N=2000 almost never
  CHECK(coarse.error_count() > 50);
  CHECK(fine.error_count() < 5);
  CHECK(coarse.error_count() > fine.error_count());
}

TEST_CASE("coincidence audit confirms functional independence for sd models") {
  const ChannelConfig ch = skew_channel(41, 2000);
  const std::vector<int> bits = alternating_bits(60);
  const TransmissionLog log = transmit(ch, bits);
  const CoincidenceAudit audit = coincidence_audit(log, ch);
  CHECK(audit.functional_independence);
  // at 2000 pairs the decode is essentially error-free, so the mutual
  // information reaches the balanced-message entropy
  CHECK(audit.mutual_information_bits > 0.95);
  CHECK(audit.mutual_information_bits <= 1.0 + 1e-12);
}

TEST_CASE("coincidence audit flags the nonlocal diagnostic channel") {
  const auto nl = make_model("nl-interval");
  const ChannelConfig ch{nl,
                         ConditionalDensity::weighted(
                             nl, WeightSpec::linear_ramp()),
                         Setting(0.0),
                         Setting(kPi / 2),
                         Setting(0.0),
                         300,
                         0.55,
                         42,
                         true,
                         true};
  const TransmissionLog log = transmit(ch, alternating_bits(40));
  const CoincidenceAudit audit = coincidence_audit(log, ch);
  // the marginal moves by flipping outcomes, and the audit sees the flips
  CHECK_FALSE(audit.functional_independence);
}

TEST_CASE("audit regenerates unrecorded pairs bit-exactly") {
  const std::vector<int> bits = alternating_bits(50);
  const ChannelConfig keep = skew_channel(51, 200, true);
  const ChannelConfig drop = skew_channel(51, 200, false);
  const TransmissionLog log_keep = transmit(keep, bits);
  const TransmissionLog log_drop = transmit(drop, bits);
  CHECK(log_drop.pair_lambdas.empty());
  CHECK(log_drop.pair_outcomes.empty());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    CHECK(log_keep.bits[i].n_plus == log_drop.bits[i].n_plus);
    CHECK(log_keep.bits[i].decoded == log_drop.bits[i].decoded);
  }
  const CoincidenceAudit a_keep = coincidence_audit(log_keep, keep);
  const CoincidenceAudit a_drop = coincidence_audit(log_drop, drop);
  CHECK(a_keep.functional_independence == a_drop.functional_independence);
  CHECK(a_keep.mutual_information_bits == a_drop.mutual_information_bits);
}

TEST_CASE("mutual information conventions") {
  const ChannelConfig ch = skew_channel(61, 400);
  // constant message: degenerate sender marginal, zero information
  const TransmissionLog log = transmit(ch, std::vector<int>(30, 1));
  const CoincidenceAudit audit = coincidence_audit(log, ch);
  CHECK(audit.mutual_information_bits == 0.0);
}

TEST_CASE("lambda codes round trip through every space") {
  const LambdaPoint p = LambdaPoint::pair(Outcome::Minus, Outcome::Plus);
  const double code = lambda_code(p);
  const LambdaPoint back = lambda_from_code(SpaceKind::FourPoint, code);
  CHECK(fourpoint_index(back.pair_value()) == fourpoint_index(p.pair_value()));
  const LambdaPoint u = lambda_from_code(SpaceKind::UnitInterval,
                                         lambda_code(LambdaPoint::unit(0.37)));
  CHECK(u.coordinate() == 0.37);
  const LambdaPoint c = lambda_from_code(SpaceKind::Circle,
                                         lambda_code(LambdaPoint::circle(2.5)));
  CHECK(c.coordinate() == 2.5);
}
