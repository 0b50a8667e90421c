#include "bellhv/emit.hpp"

#include <cstdio>

namespace bellhv::cli {

using nlohmann::json;

std::string fmt_g12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json set_to_json(const MeasurableSubset& s) {
  json j = json::object();
  if (s.kind() == SpaceKind::FourPoint) {
    json points = json::array();
    for (int i = 0; i < 4; ++i) {
      if ((s.point_mask() >> i) & 1u) points.push_back(fourpoint_label(i));
    }
    j["points"] = points;
  } else {
    json parts = json::array();
    for (const Interval& iv : s.intervals()) {
      parts.push_back({iv.lo, iv.hi});
    }
    j["intervals"] = parts;
  }
  return j;
}

json expectation_to_json(const ExpectationReport& rep) {
  json j = json::object();
  j["e_ab"] = rep.e_ab;
  j["e_a"] = rep.e_a;
  j["e_b"] = rep.e_b;
  j["joint"] = {{"pp", rep.joint[0]},
                {"pm", rep.joint[1]},
                {"mp", rep.joint[2]},
                {"mm", rep.joint[3]}};
  if (rep.method == Method::Kind::MonteCarlo) {
    j["method"] = "mc";
    j["n_samples"] = rep.n_samples;
    j["se_ab"] = rep.se_ab;
    j["se_a"] = rep.se_a;
    j["se_b"] = rep.se_b;
  } else {
    j["method"] = "exact";
  }
  return j;
}

json violation_to_json(const ViolationReport& rep) {
  json j = json::object();
  j["m_a"] = rep.m_a.radians();
  j["m_b"] = rep.m_b.radians();
  j["m_b_alt"] = rep.m_b_alt.radians();
  j["delta_a"] = rep.delta_a;
  if (rep.method == Method::Kind::MonteCarlo) {
    j["method"] = "mc";
    j["se_delta"] = rep.se_delta;
  } else {
    j["method"] = "exact";
  }
  return j;
}

json partition_to_json(const PartitionReport& rep) {
  json j = json::object();
  j["m_a"] = rep.m_a.radians();
  j["m_b"] = rep.m_b.radians();
  j["m_b_alt"] = rep.m_b_alt.radians();
  j["s"] = set_to_json(rep.s);
  j["s_a_plus"] = set_to_json(rep.s_a_plus);
  j["s_a_minus"] = set_to_json(rep.s_a_minus);
  j["s_alt_a_plus"] = set_to_json(rep.s_alt_a_plus);
  j["s_alt_a_minus"] = set_to_json(rep.s_alt_a_minus);
  return j;
}

json transition_to_json(const TransitionReport& rep) {
  json j = json::object();
  j["m_a"] = rep.m_a.radians();
  j["m_b"] = rep.m_b.radians();
  j["m_b_alt"] = rep.m_b_alt.radians();
  j["family"] = causal_family_name(rep.family);
  j["t_plus_minus"] = set_to_json(rep.t_plus_minus);
  j["t_minus_plus"] = set_to_json(rep.t_minus_plus);
  j["measure_plus_minus"] = rep.measure_plus_minus;
  j["measure_minus_plus"] = rep.measure_minus_plus;
  return j;
}

json audit_to_json(const AuditReport& rep) {
  json j = json::object();
  j["passes_locality"] = rep.passes_locality;
  j["probes_evaluated"] = rep.probes_evaluated;
  json w = json::array();
  for (const LocalityWitness& witness : rep.witnesses) {
    json jw = json::object();
    jw["lambda"] = lambda_code(witness.lambda);
    jw["wing"] = std::string(1, witness.wing);
    jw["local"] = witness.local.radians();
    jw["distant"] = witness.distant.radians();
    jw["distant_alt"] = witness.distant_alt.radians();
    jw["before"] = sign(witness.before);
    jw["after"] = sign(witness.after);
    w.push_back(jw);
  }
  j["witnesses"] = w;
  return j;
}

json mechanism_to_json(const MechanismDependenceReport& rep) {
  json j = json::object();
  j["max_tv"] = rep.max_tv;
  json table = json::array();
  for (const MechanismEntry& e : rep.table) {
    table.push_back({{"mechanism", {e.mechanism.i, e.mechanism.j}},
                     {"joint",
                      {{"pp", e.joint[0]},
                       {"pm", e.joint[1]},
                       {"mp", e.joint[2]},
                       {"mm", e.joint[3]}}}});
  }
  j["table"] = table;
  json pairs = json::array();
  for (const auto& p : rep.pairwise) {
    pairs.push_back({{"first", p.first}, {"second", p.second}, {"tv", p.tv}});
  }
  j["pairwise"] = pairs;
  return j;
}

void append_set_rows(std::vector<PlotRow>& rows, double m_a, double m_b,
                     double m_b_alt, const std::string& set_name,
                     const MeasurableSubset& set, const DensitySlice& rho) {
  if (set.kind() == SpaceKind::FourPoint) {
    for (int i = 0; i < 4; ++i) {
      if (!((set.point_mask() >> i) & 1u)) continue;
      PlotRow row;
      row.m_a = m_a;
      row.m_b = m_b;
      row.m_b_alt = m_b_alt;
      row.set_name = set_name;
      row.point = fourpoint_label(i);
      row.mass = rho.masses()[i];
      rows.push_back(row);
    }
    return;
  }
  for (const Interval& iv : set.intervals()) {
    PlotRow row;
    row.m_a = m_a;
    row.m_b = m_b;
    row.m_b_alt = m_b_alt;
    row.set_name = set_name;
    row.piece = iv;
    row.mass = rho.mass_over_interval(iv.lo, iv.hi);
    rows.push_back(row);
  }
}

std::string plotdata_csv(std::span<const PlotRow> rows) {
  std::string out = "m_a,m_b,m_b_alt,set,piece_lo,piece_hi,point,mass\n";
  for (const PlotRow& r : rows) {
    out += fmt_g12(r.m_a);
    out += ',';
    out += fmt_g12(r.m_b);
    out += ',';
    out += fmt_g12(r.m_b_alt);
    out += ',';
    out += r.set_name;
    out += ',';
    if (r.piece) {
      out += fmt_g12(r.piece->lo);
      out += ',';
      out += fmt_g12(r.piece->hi);
      out += ",,";
    } else {
      out += ",,";
      out += r.point.value_or("");
      out += ',';
    }
    out += fmt_g12(r.mass);
    out += '\n';
  }
  return out;
}

}  // namespace bellhv::cli
