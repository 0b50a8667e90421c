#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bellhv/causal.hpp"
#include "bellhv/lambda.hpp"

namespace bellhv {

// Deterministic two-wing model: outcome indicator functions over a hidden
// variable, plus the causal graph they realize. Instances are immutable and
// all evaluation is pure.
class HVModel {
 public:
  virtual ~HVModel() = default;

  const std::string& id() const { return id_; }
  const LambdaSpace& space() const { return space_; }
  const CausalMetadata& causal_signature() const { return causal_; }
  CausalFamily family() const { return causal_.family; }

  // Throws std::domain_error when lambda lives in a different space.
  Outcome outcome_A(const LambdaPoint& lambda, Setting m_a, Setting m_b) const;
  Outcome outcome_B(const LambdaPoint& lambda, Setting m_a, Setting m_b) const;

  // Coordinates where the outcome pair (A, B) may change value, canonicalized
  // into the domain, sorted, deduplicated. Empty for the four-point space.
  virtual std::vector<double> outcome_breakpoints(Setting m_a,
                                                  Setting m_b) const = 0;

 protected:
  HVModel(std::string id, SpaceKind kind, CausalMetadata causal);

  virtual Outcome eval_A(const LambdaPoint& lambda, Setting m_a,
                         Setting m_b) const = 0;
  virtual Outcome eval_B(const LambdaPoint& lambda, Setting m_a,
                         Setting m_b) const = 0;

 private:
  std::string id_;
  LambdaSpace space_;
  CausalMetadata causal_;
};

// Superdeterministic contract: each wing's indicator reads the hidden variable
// and its own setting only. The two-setting entry points above forward here
// and ignore the distant argument.
class SuperdeterministicModel : public HVModel {
 public:
  virtual Outcome local_outcome_A(const LambdaPoint& lambda,
                                  Setting m_a) const = 0;
  virtual Outcome local_outcome_B(const LambdaPoint& lambda,
                                  Setting m_b) const = 0;

 protected:
  using HVModel::HVModel;
  Outcome eval_A(const LambdaPoint& lambda, Setting m_a,
                 Setting /*m_b*/) const final {
    return local_outcome_A(lambda, m_a);
  }
  Outcome eval_B(const LambdaPoint& lambda, Setting /*m_a*/,
                 Setting m_b) const final {
    return local_outcome_B(lambda, m_b);
  }
};

// Built-in ids: "sd-brans" (four-point, predetermined outcome pairs),
// "sd-arc" (circle, sign-of-cosine indicators), "nl-interval" ([0,1) split
// into four singlet-probability blocks, distant setting read by both wings).
std::shared_ptr<const HVModel> make_model(const std::string& id);
std::vector<std::string> builtin_model_ids();

}  // namespace bellhv
