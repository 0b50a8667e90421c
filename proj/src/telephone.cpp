#include "bellhv/telephone.hpp"

#include <cmath>
#include <stdexcept>

#include "bellhv/errors.hpp"
#include "bellhv/statistics.hpp"

namespace bellhv {

double lambda_code(const LambdaPoint& p) {
  if (p.kind() == SpaceKind::FourPoint) {
    return static_cast<double>(fourpoint_index(p.pair_value()));
  }
  return p.coordinate();
}

LambdaPoint lambda_from_code(SpaceKind kind, double code) {
  switch (kind) {
    case SpaceKind::FourPoint: {
      const DiscretePair p = fourpoint_from_index(static_cast<int>(code));
      return LambdaPoint::pair(p.a_pre, p.b_pre);
    }
    case SpaceKind::UnitInterval:
      return LambdaPoint::unit(code);
    default:
      return LambdaPoint::circle(code);
  }
}

void ChannelConfig::validate() const {
  if (!model) throw std::invalid_argument("channel requires a model");
  if (density.model_id() != model->id()) {
    throw std::invalid_argument("channel density belongs to a different model");
  }
  if (!nonlocal_diagnostic &&
      model->family() != CausalFamily::Superdeterministic) {
    throw std::invalid_argument(
        "channel requires a superdeterministic model (set nonlocal_diagnostic "
        "to run the contrast case)");
  }
  if (pairs_per_bit == 0) {
    throw std::invalid_argument("pairs_per_bit must be positive");
  }
  const double p0 = exact_marginal_plus(0);
  const double p1 = exact_marginal_plus(1);
  if (std::fabs(p1 - p0) < kMinChannelGap) {
    throw ChannelError(
        "the two settings give the same exact marginal; the channel carries "
        "nothing");
  }
  const double lo = std::min(p0, p1), hi = std::max(p0, p1);
  if (!(decision_threshold > lo && decision_threshold < hi)) {
    throw ChannelError(
        "decision threshold must lie strictly between the two exact "
        "marginals");
  }
}

double ChannelConfig::exact_marginal_plus(int bit) const {
  const Setting b = bit ? bit1_setting : bit0_setting;
  const ExpectationReport rep = expectations(density, m_a, b, Method::exact());
  return rep.joint[0] + rep.joint[1];
}

TransmissionLog transmit(const ChannelConfig& cfg,
                         const std::vector<int>& message_bits) {
  cfg.validate();
  const double p0 = cfg.exact_marginal_plus(0);
  const double p1 = cfg.exact_marginal_plus(1);
  const int high_bit = p1 > p0 ? 1 : 0;  // bit decoded when p_hat is above

  const DensitySlice slice0 = cfg.density.slice(cfg.m_a, cfg.bit0_setting);
  const DensitySlice slice1 = cfg.density.slice(cfg.m_a, cfg.bit1_setting);

  TransmissionLog log;
  log.pairs_per_bit = cfg.pairs_per_bit;
  log.bits.reserve(message_bits.size());
  if (cfg.record_pairs) {
    log.pair_lambdas.reserve(message_bits.size() * cfg.pairs_per_bit);
    log.pair_outcomes.reserve(message_bits.size() * cfg.pairs_per_bit);
  }

  for (std::size_t k = 0; k < message_bits.size(); ++k) {
    const int sent = message_bits[k] ? 1 : 0;
    const Setting b = sent ? cfg.bit1_setting : cfg.bit0_setting;
    const DensitySlice& slice = sent ? slice1 : slice0;
    RngStream rng = RngStream::substream(cfg.master_seed, k);

    BitRecord rec;
    rec.sent = sent;
    for (std::uint64_t p = 0; p < cfg.pairs_per_bit; ++p) {
      const LambdaPoint lambda = slice.sample(rng);
      const Outcome oa = cfg.model->outcome_A(lambda, cfg.m_a, b);
      if (oa == Outcome::Plus) ++rec.n_plus;
      if (cfg.record_pairs) {
        log.pair_lambdas.push_back(lambda_code(lambda));
        log.pair_outcomes.push_back(static_cast<std::int8_t>(sign(oa)));
      }
    }
    rec.p_hat = static_cast<double>(rec.n_plus) /
                static_cast<double>(cfg.pairs_per_bit);
    const bool above = rec.p_hat > cfg.decision_threshold;
    rec.decoded = above ? high_bit : 1 - high_bit;
    log.bits.push_back(rec);
  }
  return log;
}

std::size_t TransmissionLog::error_count() const {
  std::size_t errors = 0;
  for (const BitRecord& b : bits) {
    if (b.sent != b.decoded) ++errors;
  }
  return errors;
}

double TransmissionLog::bit_error_rate() const {
  if (bits.empty()) return 0.0;
  return static_cast<double>(error_count()) / static_cast<double>(bits.size());
}

CoincidenceAudit coincidence_audit(const TransmissionLog& log,
                                   const ChannelConfig& cfg) {
  CoincidenceAudit audit;

  const SpaceKind kind = cfg.model->space().kind;
  const DensitySlice slice0 = cfg.density.slice(cfg.m_a, cfg.bit0_setting);
  const DensitySlice slice1 = cfg.density.slice(cfg.m_a, cfg.bit1_setting);
  const bool recorded = !log.pair_lambdas.empty();

  for (std::size_t k = 0; k < log.bits.size(); ++k) {
    const BitRecord& rec = log.bits[k];
    const Setting b_actual =
        rec.sent ? cfg.bit1_setting : cfg.bit0_setting;
    const DensitySlice& slice = rec.sent ? slice1 : slice0;
    RngStream rng = RngStream::substream(cfg.master_seed, k);

    for (std::uint64_t p = 0; p < log.pairs_per_bit; ++p) {
      LambdaPoint lambda = LambdaPoint::pair(Outcome::Plus, Outcome::Plus);
      Outcome logged = Outcome::Plus;
      if (recorded) {
        const std::size_t idx = k * log.pairs_per_bit + p;
        lambda = lambda_from_code(kind, log.pair_lambdas[idx]);
        logged = outcome_from_sign(log.pair_outcomes[idx]);
      } else {
        // regenerate this bit's draws; identical substream, identical pairs
        lambda = slice.sample(rng);
        logged = cfg.model->outcome_A(lambda, cfg.m_a, b_actual);
      }
      const Outcome under0 =
          cfg.model->outcome_A(lambda, cfg.m_a, cfg.bit0_setting);
      const Outcome under1 =
          cfg.model->outcome_A(lambda, cfg.m_a, cfg.bit1_setting);
      if (under0 != logged || under1 != logged) {
        audit.functional_independence = false;
      }
    }
    if (!audit.functional_independence) break;
  }

  // plug-in mutual information of the (sent, decoded) pair distribution
  double n[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (const BitRecord& rec : log.bits) n[rec.sent][rec.decoded] += 1.0;
  const double total = static_cast<double>(log.bits.size());
  if (total > 0.0) {
    double mi = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int d = 0; d < 2; ++d) {
        const double p = n[s][d] / total;
        if (p <= 0.0) continue;
        const double ps = (n[s][0] + n[s][1]) / total;
        const double pd = (n[0][d] + n[1][d]) / total;
        mi += p * std::log2(p / (ps * pd));
      }
    }
    audit.mutual_information_bits = std::max(0.0, mi);
  }
  return audit;
}

}  // namespace bellhv
