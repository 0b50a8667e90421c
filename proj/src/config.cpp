#include "bellhv/config.hpp"

#include <fstream>

#include "bellhv/errors.hpp"

namespace bellhv::cli {

using nlohmann::json;

const char* format_name(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format: " + name);
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(path, "expected an unsigned integer");
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (const json& v : j) out.push_back(as_number(v, path + "[]"));
  return out;
}

WeightSpec parse_weights(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a weight object");
  if (j.contains("fourpoint")) {
    const std::vector<double> w = as_number_list(j.at("fourpoint"), path + ".fourpoint");
    if (w.size() != 4) fail(path + ".fourpoint", "needs exactly four weights");
    return WeightSpec::fourpoint({w[0], w[1], w[2], w[3]});
  }
  if (j.contains("bins")) {
    return WeightSpec::bins(as_number_list(j.at("bins"), path + ".bins"));
  }
  if (j.contains("arc_edges")) {
    ArcWeights arcs;
    arcs.edges = as_number_list(j.at("arc_edges"), path + ".arc_edges");
    arcs.heights = as_number_list(need(j, "heights", path), path + ".heights");
    return WeightSpec::arcs(std::move(arcs));
  }
  if (j.contains("linear")) {
    if (!as_bool(j.at("linear"), path + ".linear")) {
      fail(path + ".linear", "must be true when present");
    }
    return WeightSpec::linear_ramp();
  }
  fail(path, "expected one of fourpoint / bins / arc_edges / linear");
}

json weights_to_json(const WeightSpec& w) {
  json j = json::object();
  if (w.point_weights) {
    j["fourpoint"] = *w.point_weights;
  } else if (w.bin_heights) {
    j["bins"] = *w.bin_heights;
  } else if (w.arc_weights) {
    j["arc_edges"] = w.arc_weights->edges;
    j["heights"] = w.arc_weights->heights;
  } else {
    j["linear"] = true;
  }
  return j;
}

DensitySpec parse_density(const json& j, const std::string& path) {
  DensitySpec spec;
  if (!j.is_object()) fail(path, "expected a density object");
  if (j.contains("mechanism")) {
    const json& m = j.at("mechanism");
    if (!m.is_array() || m.size() != 2) {
      fail(path + ".mechanism", "expected a pair [i, j]");
    }
    spec.mechanism.i = as_int(m[0], path + ".mechanism[0]");
    spec.mechanism.j = as_int(m[1], path + ".mechanism[1]");
  }
  const std::string form = as_string(need(j, "form", path), path + ".form");
  if (form == "equilibrium") {
    spec.form = DensityForm::Equilibrium;
    if (j.contains("weights")) {
      fail(path + ".weights", "equilibrium form takes no weights");
    }
  } else if (form == "weighted") {
    spec.form = DensityForm::Weighted;
    spec.weights = parse_weights(need(j, "weights", path), path + ".weights");
  } else {
    fail(path + ".form", "expected equilibrium or weighted");
  }
  return spec;
}

json density_to_json(const DensitySpec& d) {
  json j = json::object();
  j["mechanism"] = {d.mechanism.i, d.mechanism.j};
  j["form"] = d.form == DensityForm::Weighted ? "weighted" : "equilibrium";
  if (d.weights) j["weights"] = weights_to_json(*d.weights);
  return j;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  cfg.model = as_string(need(j, "model", "config"), "config.model");
  SpaceKind space;
  try {
    space = make_model(cfg.model)->space().kind;  // reject unknown ids early
  } catch (const std::invalid_argument& e) {
    fail("config.model", e.what());
  }
  auto check_weights = [&](const DensitySpec& d, const std::string& path) {
    if (!d.weights) return;
    try {
      d.weights->validate(space);
    } catch (const std::invalid_argument& e) {
      fail(path + ".weights", e.what());
    }
  };

  if (j.contains("density")) {
    cfg.density = parse_density(j.at("density"), "config.density");
    check_weights(cfg.density, "config.density");
  }
  if (j.contains("densities")) {
    const json& arr = j.at("densities");
    if (!arr.is_array()) fail("config.densities", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "config.densities[" + std::to_string(i) + "]";
      cfg.densities.push_back(parse_density(arr[i], path));
      check_weights(cfg.densities.back(), path);
    }
  }
  if (j.contains("settings")) {
    const json& s = j.at("settings");
    SettingsSpec spec;
    if (s.contains("a")) spec.a = as_number(s.at("a"), "config.settings.a");
    if (s.contains("b")) spec.b = as_number(s.at("b"), "config.settings.b");
    if (s.contains("a_alt")) {
      spec.a_alt = as_number(s.at("a_alt"), "config.settings.a_alt");
    }
    if (s.contains("b_alt")) {
      spec.b_alt = as_number(s.at("b_alt"), "config.settings.b_alt");
    }
    cfg.settings = spec;
  }
  if (j.contains("grid")) {
    GridSpec g;
    g.count = as_int(need(j.at("grid"), "count", "config.grid"), "config.grid.count");
    if (g.count < 1) fail("config.grid.count", "must be positive");
    cfg.grid = g;
  }
  if (j.contains("method")) {
    const json& m = j.at("method");
    const std::string kind = as_string(need(m, "kind", "config.method"),
                                       "config.method.kind");
    if (kind == "exact") {
      cfg.method.kind = Method::Kind::Exact;
    } else if (kind == "mc") {
      cfg.method.kind = Method::Kind::MonteCarlo;
      if (m.contains("samples")) {
        cfg.method.samples = as_u64(m.at("samples"), "config.method.samples");
      }
      if (m.contains("seed")) {
        cfg.method.seed = as_u64(m.at("seed"), "config.method.seed");
      }
    } else {
      fail("config.method.kind", "expected exact or mc");
    }
  }
  if (j.contains("telephone")) {
    const json& t = j.at("telephone");
    TelephoneSpec spec;
    spec.m_a = as_number(need(t, "m_a", "config.telephone"), "config.telephone.m_a");
    spec.bit0 = as_number(need(t, "bit0", "config.telephone"), "config.telephone.bit0");
    spec.bit1 = as_number(need(t, "bit1", "config.telephone"), "config.telephone.bit1");
    spec.threshold = as_number(need(t, "threshold", "config.telephone"),
                               "config.telephone.threshold");
    if (t.contains("pairs_per_bit")) {
      spec.pairs_per_bit = as_u64(t.at("pairs_per_bit"),
                                  "config.telephone.pairs_per_bit");
    }
    if (t.contains("message_bits")) {
      spec.message_bits = as_string(t.at("message_bits"),
                                    "config.telephone.message_bits");
    }
    if (t.contains("message_ascii")) {
      spec.message_ascii = as_string(t.at("message_ascii"),
                                     "config.telephone.message_ascii");
    }
    if (t.contains("random_bits")) {
      spec.random_bits = as_u64(t.at("random_bits"),
                                "config.telephone.random_bits");
    }
    const int sources = (spec.message_bits ? 1 : 0) +
                        (spec.message_ascii ? 1 : 0) +
                        (spec.random_bits ? 1 : 0);
    if (sources != 1) {
      fail("config.telephone",
           "exactly one of message_bits / message_ascii / random_bits");
    }
    if (t.contains("seed")) {
      spec.seed = as_u64(t.at("seed"), "config.telephone.seed");
    }
    if (t.contains("record_pairs")) {
      spec.record_pairs = as_bool(t.at("record_pairs"),
                                  "config.telephone.record_pairs");
    }
    if (t.contains("log_pairs")) {
      spec.log_pairs = as_bool(t.at("log_pairs"), "config.telephone.log_pairs");
    }
    if (t.contains("nonlocal_diagnostic")) {
      spec.nonlocal_diagnostic = as_bool(t.at("nonlocal_diagnostic"),
                                         "config.telephone.nonlocal_diagnostic");
    }
    cfg.telephone = spec;
  }
  if (j.contains("audit")) {
    const json& a = j.at("audit");
    if (a.contains("grid_points")) {
      cfg.audit.grid_points = as_int(a.at("grid_points"),
                                     "config.audit.grid_points");
    }
    if (a.contains("include_outcome_pieces")) {
      cfg.audit.include_outcome_pieces =
          as_bool(a.at("include_outcome_pieces"),
                  "config.audit.include_outcome_pieces");
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("dir")) {
      cfg.output.dir = as_string(o.at("dir"), "config.output.dir");
    }
    if (o.contains("format")) {
      cfg.output.format =
          format_from_name(as_string(o.at("format"), "config.output.format"));
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j = json::object();
  j["model"] = model;
  j["density"] = density_to_json(density);
  if (!densities.empty()) {
    json arr = json::array();
    for (const DensitySpec& d : densities) arr.push_back(density_to_json(d));
    j["densities"] = arr;
  }
  if (settings) {
    json s = json::object();
    if (settings->a) s["a"] = *settings->a;
    if (settings->b) s["b"] = *settings->b;
    if (settings->a_alt) s["a_alt"] = *settings->a_alt;
    if (settings->b_alt) s["b_alt"] = *settings->b_alt;
    j["settings"] = s;
  }
  if (grid) j["grid"] = {{"count", grid->count}};
  {
    json m = json::object();
    if (method.kind == Method::Kind::Exact) {
      m["kind"] = "exact";
    } else {
      m["kind"] = "mc";
      m["samples"] = method.samples;
      m["seed"] = method.seed;
    }
    j["method"] = m;
  }
  if (telephone) {
    json t = json::object();
    t["m_a"] = telephone->m_a;
    t["bit0"] = telephone->bit0;
    t["bit1"] = telephone->bit1;
    t["pairs_per_bit"] = telephone->pairs_per_bit;
    t["threshold"] = telephone->threshold;
    if (telephone->message_bits) t["message_bits"] = *telephone->message_bits;
    if (telephone->message_ascii) t["message_ascii"] = *telephone->message_ascii;
    if (telephone->random_bits) t["random_bits"] = *telephone->random_bits;
    t["seed"] = telephone->seed;
    t["record_pairs"] = telephone->record_pairs;
    t["log_pairs"] = telephone->log_pairs;
    t["nonlocal_diagnostic"] = telephone->nonlocal_diagnostic;
    j["telephone"] = t;
  }
  j["audit"] = {{"grid_points", audit.grid_points},
                {"include_outcome_pieces", audit.include_outcome_pieces}};
  j["output"] = {{"dir", output.dir}, {"format", format_name(output.format)}};
  return j;
}

namespace {

ConditionalDensity realize(const std::string& model_id, const DensitySpec& spec) {
  auto model = make_model(model_id);
  try {
    if (spec.form == DensityForm::Equilibrium) {
      return ConditionalDensity::equilibrium(std::move(model), spec.mechanism);
    }
    return ConditionalDensity::weighted(std::move(model), *spec.weights,
                                        spec.mechanism);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("density: ") + e.what());
  }
}

}  // namespace

ConditionalDensity RunConfig::build_density() const {
  return realize(model, density);
}

std::vector<ConditionalDensity> RunConfig::build_densities() const {
  std::vector<ConditionalDensity> out;
  if (densities.empty()) {
    out.push_back(build_density());
    return out;
  }
  for (const DensitySpec& d : densities) out.push_back(realize(model, d));
  return out;
}

}  // namespace bellhv::cli
