#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "bellhv/model.hpp"
#include "bellhv/slice.hpp"

namespace bellhv {

// Piecewise-constant weight on a circle arc partition. heights[i] applies on
// [edges[i], edges[i+1]), the last arc wraps from edges.back() to edges[0].
struct ArcWeights {
  std::vector<double> edges;    // sorted, within [0, 2*pi), at least one
  std::vector<double> heights;  // same length as edges
  friend bool operator==(const ArcWeights&, const ArcWeights&) = default;
};

// Settings-independent multiplicative weight w(lambda). Exactly one
// alternative is set; which one must match the model's space. This family
// (four point weights, bin histograms, arc histograms, or w = 2*lambda) is one
// representative parameterization of nonequilibrium distributions; it keeps
// every integral closed-form.
struct WeightSpec {
  std::optional<std::array<double, 4>> point_weights;  // four-point space
  std::optional<std::vector<double>> bin_heights;      // [0,1): equal-width bins
  std::optional<ArcWeights> arc_weights;               // circle
  bool linear = false;                                 // [0,1): w(x) = 2x

  static WeightSpec fourpoint(const std::array<double, 4>& w);
  static WeightSpec bins(std::vector<double> heights);
  static WeightSpec arcs(ArcWeights w);
  static WeightSpec linear_ramp();

  void validate(SpaceKind kind) const;
  bool is_unit() const;  // weight identically one
  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

enum class DensityForm { Equilibrium, Weighted };

// Which localized setting mechanism realizes the settings; purely a label
// used when probing mechanism dependence of the distribution.
struct MechanismPair {
  int i = 1;
  int j = 1;
  friend bool operator==(const MechanismPair&, const MechanismPair&) = default;
};

// Conditional distribution rho(lambda | M_A, M_B) for one model.
//
// Equilibrium reproduces singlet statistics: four singlet point masses
// (four-point space), singlet mass spread uniformly over each constant-outcome
// arc (circle), or the uniform density (unit interval, settings-independent).
// Weighted form is w(lambda) * rho_eq / Z with Z the normalization at the
// given settings; for the unit-interval model this reduces to the normalized
// weight itself.
class ConditionalDensity {
 public:
  static ConditionalDensity equilibrium(std::shared_ptr<const HVModel> model,
                                        MechanismPair mechanism = {});
  static ConditionalDensity weighted(std::shared_ptr<const HVModel> model,
                                     WeightSpec weights,
                                     MechanismPair mechanism = {});

  const HVModel& model() const { return *model_; }
  std::shared_ptr<const HVModel> model_ptr() const { return model_; }
  const std::string& model_id() const { return model_->id(); }
  DensityForm form() const { return form_; }
  MechanismPair mechanism() const { return mechanism_; }
  const std::optional<WeightSpec>& weights() const { return weights_; }

  // Frozen at one setting pair; throws DegenerateDistributionError when the
  // weight annihilates all equilibrium mass (Z = 0).
  DensitySlice slice(Setting m_a, Setting m_b) const;

  double density_at(const LambdaPoint& lambda, Setting m_a, Setting m_b) const;

  // |integral of rho - 1|, from the closed-form piece masses
  double normalization_residual(Setting m_a, Setting m_b) const;

  LambdaPoint sample(Setting m_a, Setting m_b, RngStream& rng) const;

  // Statistical content comparison: mechanism labels are ignored, the model
  // and the (form, weights) payload decide.
  bool same_form(const ConditionalDensity& other) const;

 private:
  ConditionalDensity(std::shared_ptr<const HVModel> model, DensityForm form,
                     std::optional<WeightSpec> weights, MechanismPair mechanism);

  std::shared_ptr<const HVModel> model_;
  DensityForm form_ = DensityForm::Equilibrium;
  std::optional<WeightSpec> weights_;
  MechanismPair mechanism_{};
};

ConditionalDensity equilibrium_for(const std::string& model_id);

// Applies a weight to an equilibrium-form density (the nonequilibrium rule is
// w * rho_eq / Z, so stacking weights has no defined meaning and throws).
// A unit weight returns the equilibrium unchanged.
ConditionalDensity perturb(const ConditionalDensity& d, const WeightSpec& w);

}  // namespace bellhv
