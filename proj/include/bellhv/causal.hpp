#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bellhv {

enum class CausalFamily { NonlocalDeterministic, Superdeterministic };

const char* causal_family_name(CausalFamily f);

enum class CausalNode { Lambda, SettingA, SettingB, OutcomeA, OutcomeB };

const char* causal_node_name(CausalNode n);

struct CausalEdge {
  CausalNode from;
  CausalNode to;
  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

// Cosmological flavor of a superdeterministic model. Annotation only; nothing
// in the simulation reads it.
enum class SdType { TypeI, TypeII };

// Directed-graph summary of which variables influence which. Family rules:
// superdeterministic graphs never route a distant setting into an outcome and
// never route a setting into lambda; nonlocal-deterministic graphs carry both
// distant-setting edges and keep lambda free of incoming edges.
struct CausalMetadata {
  CausalFamily family = CausalFamily::Superdeterministic;
  std::vector<CausalEdge> edges;
  std::optional<SdType> sd_type;

  bool has_edge(CausalNode from, CausalNode to) const;
  // Throws std::invalid_argument when the edge list contradicts the family.
  void validate() const;
};

}  // namespace bellhv
