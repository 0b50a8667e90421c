#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellhv/analysis.hpp"
#include "bellhv/audit.hpp"
#include "bellhv/statistics.hpp"
#include "bellhv/telephone.hpp"

namespace bellhv::cli {

// All file output goes through these renderers. Numbers are printed with 12
// significant digits so identical runs produce identical bytes.
std::string fmt_g12(double v);

nlohmann::json set_to_json(const MeasurableSubset& s);
nlohmann::json expectation_to_json(const ExpectationReport& rep);
nlohmann::json violation_to_json(const ViolationReport& rep);
nlohmann::json partition_to_json(const PartitionReport& rep);
nlohmann::json transition_to_json(const TransitionReport& rep);
nlohmann::json audit_to_json(const AuditReport& rep);
nlohmann::json mechanism_to_json(const MechanismDependenceReport& rep);

// Long-format row describing one piece of one named set at one settings
// triple: segment spaces fill piece_lo/piece_hi, the four-point space fills
// the point label instead. mass is the rho-measure of the piece.
struct PlotRow {
  double m_a = 0.0, m_b = 0.0, m_b_alt = 0.0;
  std::string set_name;
  std::optional<Interval> piece;
  std::optional<std::string> point;
  double mass = 0.0;
};

// one row per interval piece or member point; empty sets append nothing
void append_set_rows(std::vector<PlotRow>& rows, double m_a, double m_b,
                     double m_b_alt, const std::string& set_name,
                     const MeasurableSubset& set, const DensitySlice& rho);

// header is always present, so an empty row span yields a header-only file
std::string plotdata_csv(std::span<const PlotRow> rows);

}  // namespace bellhv::cli
