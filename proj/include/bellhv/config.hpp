#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellhv/density.hpp"
#include "bellhv/statistics.hpp"

namespace bellhv::cli {

enum class OutputFormat { Csv, Json };

const char* format_name(OutputFormat f);
OutputFormat format_from_name(const std::string& name);

struct DensitySpec {
  MechanismPair mechanism{};
  DensityForm form = DensityForm::Equilibrium;
  std::optional<WeightSpec> weights;  // present iff form is Weighted
};

// Explicit settings; which fields a subcommand needs depends on the
// subcommand (violation wants a/b/b_alt, chsh all four).
struct SettingsSpec {
  std::optional<double> a, b, a_alt, b_alt;
};

// Evenly spaced angles k * 2*pi / count, k = 0..count-1.
struct GridSpec {
  int count = 20;
};

struct MethodSpec {
  Method::Kind kind = Method::Kind::Exact;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

struct TelephoneSpec {
  double m_a = 0.0;
  double bit0 = 0.0;
  double bit1 = 0.0;
  std::uint64_t pairs_per_bit = 1000;
  double threshold = 0.5;
  // exactly one message source
  std::optional<std::string> message_bits;   // e.g. "100110"
  std::optional<std::string> message_ascii;  // bytes emitted MSB first
  std::optional<std::uint64_t> random_bits;  // count, drawn from the seed
  std::uint64_t seed = 0;
  bool record_pairs = true;
  bool log_pairs = false;  // add per-pair arrays to the JSONL records
  bool nonlocal_diagnostic = false;
};

struct AuditSpec {
  int grid_points = 64;
  bool include_outcome_pieces = true;
};

struct OutputSpec {
  std::string dir;
  OutputFormat format = OutputFormat::Csv;
};

// Parsed run configuration. to_json() is a pure function of the struct, so
// emit -> parse -> emit is stable byte for byte.
struct RunConfig {
  std::string model;
  DensitySpec density;
  std::vector<DensitySpec> densities;  // mechanism probe only
  std::optional<SettingsSpec> settings;
  std::optional<GridSpec> grid;
  MethodSpec method;
  std::optional<TelephoneSpec> telephone;
  AuditSpec audit;
  OutputSpec output;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // density objects ready for evaluation
  ConditionalDensity build_density() const;
  std::vector<ConditionalDensity> build_densities() const;
};

}  // namespace bellhv::cli
