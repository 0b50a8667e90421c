#include "bellhv/causal.hpp"

#include <algorithm>
#include <stdexcept>

namespace bellhv {

const char* causal_family_name(CausalFamily f) {
  return f == CausalFamily::Superdeterministic ? "superdeterministic"
                                               : "nonlocal-deterministic";
}

const char* causal_node_name(CausalNode n) {
  switch (n) {
    case CausalNode::Lambda:
      return "lambda";
    case CausalNode::SettingA:
      return "M_A";
    case CausalNode::SettingB:
      return "M_B";
    case CausalNode::OutcomeA:
      return "A";
    default:
      return "B";
  }
}

bool CausalMetadata::has_edge(CausalNode from, CausalNode to) const {
  return std::find(edges.begin(), edges.end(), CausalEdge{from, to}) !=
         edges.end();
}

void CausalMetadata::validate() const {
  if (family == CausalFamily::Superdeterministic) {
    if (has_edge(CausalNode::SettingB, CausalNode::OutcomeA) ||
        has_edge(CausalNode::SettingA, CausalNode::OutcomeB)) {
      throw std::invalid_argument(
          "superdeterministic graph must not route a distant setting into an "
          "outcome");
    }
    if (has_edge(CausalNode::SettingA, CausalNode::Lambda) ||
        has_edge(CausalNode::SettingB, CausalNode::Lambda)) {
      throw std::invalid_argument(
          "superdeterministic graph must not route a setting into lambda");
    }
  } else {
    if (!has_edge(CausalNode::SettingB, CausalNode::OutcomeA) ||
        !has_edge(CausalNode::SettingA, CausalNode::OutcomeB)) {
      throw std::invalid_argument(
          "nonlocal-deterministic graph must carry both distant-setting "
          "edges");
    }
    if (has_edge(CausalNode::Lambda, CausalNode::SettingA) ||
        has_edge(CausalNode::Lambda, CausalNode::SettingB) ||
        has_edge(CausalNode::SettingA, CausalNode::Lambda) ||
        has_edge(CausalNode::SettingB, CausalNode::Lambda)) {
      throw std::invalid_argument(
          "nonlocal-deterministic graph keeps lambda and settings "
          "uncorrelated");
    }
    if (sd_type.has_value()) {
      throw std::invalid_argument(
          "cosmological annotation applies to superdeterministic models only");
    }
  }
}

}  // namespace bellhv
