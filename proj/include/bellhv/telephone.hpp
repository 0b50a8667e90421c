#pragma once

#include <cstdint>
#include <vector>

#include "bellhv/density.hpp"

namespace bellhv {

// Marginal gaps below this count as zero: floating-point equilibrium
// marginals differ across settings at ~1e-16 even though the exact gap is 0.
inline constexpr double kMinChannelGap = 1e-12;

// One-way channel from wing B's setting choice to wing A's empirical
// marginal. Each message bit selects a B setting; the A wing estimates
// P(A=+) over pairs_per_bit runs and thresholds it.
//
// The channel requires a nonequilibrium density on a superdeterministic
// model. nonlocal_diagnostic relaxes the family check so the same machinery
// can demonstrate that a nonlocal model moves the marginal by changing
// outcomes functionally rather than by a distribution reshuffle.
struct ChannelConfig {
  std::shared_ptr<const HVModel> model;
  ConditionalDensity density;
  Setting m_a;
  Setting bit0_setting;
  Setting bit1_setting;
  std::uint64_t pairs_per_bit = 1000;
  double decision_threshold = 0.5;
  std::uint64_t master_seed = 0;
  bool nonlocal_diagnostic = false;
  bool record_pairs = true;  // keep per-pair (lambda, A) in memory for audits

  // Throws ChannelError when the exact marginal gap is (numerically) zero or
  // the threshold does not lie strictly between the two exact marginals.
  void validate() const;

  // exact P(A=+) when the B wing holds the given bit's setting
  double exact_marginal_plus(int bit) const;
};

struct BitRecord {
  int sent = 0;
  int decoded = 0;
  std::uint64_t n_plus = 0;
  double p_hat = 0.0;
};

// Per-pair data is stored flat, bit-major, pairs_per_bit entries per bit.
// Four-point lambdas are stored as their point index. With record_pairs off
// the vectors stay empty; audits then regenerate pairs from the per-bit
// substreams, which reproduces the transmission bit-exactly.
struct TransmissionLog {
  std::vector<BitRecord> bits;
  std::vector<double> pair_lambdas;
  std::vector<std::int8_t> pair_outcomes;
  std::uint64_t pairs_per_bit = 0;

  std::size_t error_count() const;
  double bit_error_rate() const;
};

// Deterministic given the config: bit k draws from substream(master_seed, k).
TransmissionLog transmit(const ChannelConfig& cfg,
                         const std::vector<int>& message_bits);

struct CoincidenceAudit {
  // true when every logged A-outcome is reproduced with the B setting
  // replaced by either alternative, i.e. the marginal moved without any
  // outcome depending on the distant wing
  bool functional_independence = true;
  // plug-in mutual information between sent and decoded bits, in bits;
  // zero by convention when either marginal is degenerate
  double mutual_information_bits = 0.0;
};

CoincidenceAudit coincidence_audit(const TransmissionLog& log,
                                   const ChannelConfig& cfg);

// helpers for the flat per-pair storage
double lambda_code(const LambdaPoint& p);
LambdaPoint lambda_from_code(SpaceKind kind, double code);

}  // namespace bellhv
