#include "bellhv/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace bellhv {

HVModel::HVModel(std::string id, SpaceKind kind, CausalMetadata causal)
    : id_(std::move(id)), space_{kind}, causal_(std::move(causal)) {
  causal_.validate();
}

Outcome HVModel::outcome_A(const LambdaPoint& lambda, Setting m_a,
                           Setting m_b) const {
  if (!space_.contains(lambda)) {
    throw std::domain_error("lambda outside the model's space");
  }
  return eval_A(lambda, m_a, m_b);
}

Outcome HVModel::outcome_B(const LambdaPoint& lambda, Setting m_a,
                           Setting m_b) const {
  if (!space_.contains(lambda)) {
    throw std::domain_error("lambda outside the model's space");
  }
  return eval_B(lambda, m_a, m_b);
}

namespace {

// sign-of-cosine with the tie broken upward: cos == 0 counts as +1
Outcome sgn_cos(double x) {
  return std::cos(x) >= 0.0 ? Outcome::Plus : Outcome::Minus;
}

// Predetermined outcome pairs: the hidden variable already is the answer both
// wings will give, settings are ignored by the indicators.
class BransPairModel final : public SuperdeterministicModel {
 public:
  BransPairModel()
      : SuperdeterministicModel(
            "sd-brans", SpaceKind::FourPoint,
            CausalMetadata{
                CausalFamily::Superdeterministic,
                {{CausalNode::Lambda, CausalNode::OutcomeA},
                 {CausalNode::Lambda, CausalNode::OutcomeB},
                 {CausalNode::Lambda, CausalNode::SettingA},
                 {CausalNode::Lambda, CausalNode::SettingB}},
                std::nullopt}) {}

  Outcome local_outcome_A(const LambdaPoint& lambda, Setting) const override {
    return lambda.pair_value().a_pre;
  }
  Outcome local_outcome_B(const LambdaPoint& lambda, Setting) const override {
    return lambda.pair_value().b_pre;
  }
  std::vector<double> outcome_breakpoints(Setting, Setting) const override {
    return {};
  }
};

// Hidden direction on the circle; each wing reports the sign of the cosine to
// its own setting, wing B with flipped sign.
class ArcSignModel final : public SuperdeterministicModel {
 public:
  ArcSignModel()
      : SuperdeterministicModel(
            "sd-arc", SpaceKind::Circle,
            CausalMetadata{
                CausalFamily::Superdeterministic,
                {{CausalNode::Lambda, CausalNode::OutcomeA},
                 {CausalNode::Lambda, CausalNode::OutcomeB},
                 {CausalNode::Lambda, CausalNode::SettingA},
                 {CausalNode::Lambda, CausalNode::SettingB},
                 {CausalNode::SettingA, CausalNode::OutcomeA},
                 {CausalNode::SettingB, CausalNode::OutcomeB}},
                std::nullopt}) {}

  Outcome local_outcome_A(const LambdaPoint& lambda, Setting m_a) const override {
    return sgn_cos(lambda.coordinate() - m_a.radians());
  }
  Outcome local_outcome_B(const LambdaPoint& lambda, Setting m_b) const override {
    return sgn_cos(lambda.coordinate() - m_b.radians()) == Outcome::Plus
               ? Outcome::Minus
               : Outcome::Plus;
  }
  std::vector<double> outcome_breakpoints(Setting m_a, Setting m_b) const override {
    std::vector<double> cuts = {
        Setting::canonical(m_a.radians() - kPi / 2),
        Setting::canonical(m_a.radians() + kPi / 2),
        Setting::canonical(m_b.radians() - kPi / 2),
        Setting::canonical(m_b.radians() + kPi / 2)};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
  }
};

// [0,1) carved into four consecutive blocks whose lengths are the singlet
// joint probabilities at the current setting pair, in the fixed block order
// (+,+), (-,+), (+,-), (-,-). Both wings look up the block of lambda, so each
// wing's answer shifts when the distant setting moves the block boundaries.
class SingletBlockModel final : public HVModel {
 public:
  SingletBlockModel()
      : HVModel("nl-interval", SpaceKind::UnitInterval,
                CausalMetadata{
                    CausalFamily::NonlocalDeterministic,
                    {{CausalNode::Lambda, CausalNode::OutcomeA},
                     {CausalNode::Lambda, CausalNode::OutcomeB},
                     {CausalNode::SettingA, CausalNode::OutcomeA},
                     {CausalNode::SettingB, CausalNode::OutcomeB},
                     {CausalNode::SettingB, CausalNode::OutcomeA},
                     {CausalNode::SettingA, CausalNode::OutcomeB}},
                    std::nullopt}) {}

  static constexpr DiscretePair kBlockOutcomes[4] = {
      {Outcome::Plus, Outcome::Plus},
      {Outcome::Minus, Outcome::Plus},
      {Outcome::Plus, Outcome::Minus},
      {Outcome::Minus, Outcome::Minus}};

  // cumulative block boundaries q1 <= q2 <= q3 within (0, 1)
  static std::array<double, 3> block_bounds(Setting m_a, Setting m_b) {
    const double c = cos_separation(m_a, m_b);
    const double q1 = singlet_joint(Outcome::Plus, Outcome::Plus, c);
    const double q2 = q1 + singlet_joint(Outcome::Minus, Outcome::Plus, c);
    const double q3 = q2 + singlet_joint(Outcome::Plus, Outcome::Minus, c);
    return {q1, q2, q3};
  }

  static DiscretePair block_of(double x, Setting m_a, Setting m_b) {
    const auto q = block_bounds(m_a, m_b);
    if (x < q[0]) return kBlockOutcomes[0];
    if (x < q[1]) return kBlockOutcomes[1];
    if (x < q[2]) return kBlockOutcomes[2];
    return kBlockOutcomes[3];
  }

  std::vector<double> outcome_breakpoints(Setting m_a, Setting m_b) const override {
    const auto q = block_bounds(m_a, m_b);
    std::vector<double> cuts(q.begin(), q.end());
    std::erase_if(cuts, [](double v) { return !(v > 0.0 && v < 1.0); });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
  }

 protected:
  Outcome eval_A(const LambdaPoint& lambda, Setting m_a,
                 Setting m_b) const override {
    return block_of(lambda.coordinate(), m_a, m_b).a_pre;
  }
  Outcome eval_B(const LambdaPoint& lambda, Setting m_a,
                 Setting m_b) const override {
    return block_of(lambda.coordinate(), m_a, m_b).b_pre;
  }
};

}  // namespace

std::shared_ptr<const HVModel> make_model(const std::string& id) {
  if (id == "sd-brans") return std::make_shared<BransPairModel>();
  if (id == "sd-arc") return std::make_shared<ArcSignModel>();
  if (id == "nl-interval") return std::make_shared<SingletBlockModel>();
  throw std::invalid_argument("unknown model id: " + id);
}

std::vector<std::string> builtin_model_ids() {
  return {"sd-brans", "sd-arc", "nl-interval"};
}

}  // namespace bellhv
