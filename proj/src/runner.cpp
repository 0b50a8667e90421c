#include "bellhv/runner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bellhv/analysis.hpp"
#include "bellhv/audit.hpp"
#include "bellhv/emit.hpp"
#include "bellhv/errors.hpp"
#include "bellhv/rng.hpp"
#include "bellhv/statistics.hpp"
#include "bellhv/telephone.hpp"

namespace bellhv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// Ordered results, unordered execution: each row index is claimed once and
// written to its own slot, so the artifact bytes never depend on `workers`.
void parallel_rows(std::size_t n, int workers,
                   const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  const std::size_t n_threads =
      std::min(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> grid_angles(const GridSpec& g) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(g.count));
  for (int i = 0; i < g.count; ++i) {
    v.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(g.count));
  }
  return v;
}

double require_setting(const std::optional<SettingsSpec>& s,
                       const std::optional<double> SettingsSpec::* field,
                       const char* name) {
  if (s && (*s).*field) return *((*s).*field);
  throw ConfigError(std::string("settings.") + name +
                    " is required for this subcommand (or provide grid.count)");
}

bool has_setting(const std::optional<SettingsSpec>& s,
                 const std::optional<double> SettingsSpec::* field) {
  return s && ((*s).*field).has_value();
}

struct SettingPairRow {
  double a = 0.0, b = 0.0;
};

struct SettingTripleRow {
  double a = 0.0, b = 0.0, b_alt = 0.0;
};

// Explicit settings take precedence; the grid is the bulk fallback.
std::vector<SettingPairRow> resolve_pairs(const RunConfig& cfg) {
  if (has_setting(cfg.settings, &SettingsSpec::a) &&
      has_setting(cfg.settings, &SettingsSpec::b)) {
    return {{*cfg.settings->a, *cfg.settings->b}};
  }
  if (cfg.grid) {
    const std::vector<double> angles = grid_angles(*cfg.grid);
    std::vector<SettingPairRow> rows;
    rows.reserve(angles.size() * angles.size());
    for (double a : angles) {
      for (double b : angles) rows.push_back({a, b});
    }
    return rows;
  }
  throw ConfigError("provide settings.a and settings.b, or grid.count");
}

std::vector<SettingTripleRow> resolve_triples(const RunConfig& cfg) {
  if (has_setting(cfg.settings, &SettingsSpec::a) &&
      has_setting(cfg.settings, &SettingsSpec::b) &&
      has_setting(cfg.settings, &SettingsSpec::b_alt)) {
    return {{*cfg.settings->a, *cfg.settings->b, *cfg.settings->b_alt}};
  }
  if (cfg.grid) {
    const std::vector<double> angles = grid_angles(*cfg.grid);
    std::vector<SettingTripleRow> rows;
    rows.reserve(angles.size() * angles.size() * angles.size());
    for (double a : angles) {
      for (double b : angles) {
        for (double b_alt : angles) rows.push_back({a, b, b_alt});
      }
    }
    return rows;
  }
  throw ConfigError(
      "provide settings.a, settings.b and settings.b_alt, or grid.count");
}

OutputFormat resolve_format(const RunConfig& cfg, const RunOptions& opt) {
  return opt.format.value_or(cfg.output.format);
}

std::uint64_t resolve_seed(const RunConfig& cfg, const RunOptions& opt) {
  return opt.seed.value_or(cfg.method.seed);
}

// Monte Carlo rows get row-mixed seeds so results are a pure function of the
// row coordinates. With several rows the parallelism lives at row level and
// each expectation runs single-threaded; a lone row gets all workers.
Method row_method(const RunConfig& cfg, const RunOptions& opt,
                  std::uint64_t row, bool many_rows) {
  if (cfg.method.kind == Method::Kind::Exact) return Method::exact();
  const std::uint64_t seed = mix_seed(resolve_seed(cfg, opt), row);
  return Method::monte_carlo(cfg.method.samples, seed,
                             many_rows ? 1 : opt.workers);
}

void run_correlations(const RunConfig& cfg, const RunOptions& opt,
                      std::ostream& log) {
  const ConditionalDensity d = cfg.build_density();
  const std::vector<SettingPairRow> rows = resolve_pairs(cfg);
  const bool mc = cfg.method.kind == Method::Kind::MonteCarlo;
  std::vector<ExpectationReport> reports(rows.size());
  parallel_rows(rows.size(), rows.size() > 1 ? opt.workers : 1,
                [&](std::size_t i) {
                  reports[i] = expectations(
                      d, Setting(rows[i].a), Setting(rows[i].b),
                      row_method(cfg, opt, i, rows.size() > 1));
                });
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv = "m_a,m_b,e_ab,e_a,e_b,p_pp,p_pm,p_mp,p_mm";
    if (mc) csv += ",n_samples,se_ab,se_a,se_b";
    csv += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ExpectationReport& r = reports[i];
      csv += fmt_g12(Setting(rows[i].a).radians()) + ',' +
             fmt_g12(Setting(rows[i].b).radians()) + ',' + fmt_g12(r.e_ab) +
             ',' + fmt_g12(r.e_a) + ',' + fmt_g12(r.e_b) + ',' +
             fmt_g12(r.joint[0]) + ',' + fmt_g12(r.joint[1]) + ',' +
             fmt_g12(r.joint[2]) + ',' + fmt_g12(r.joint[3]);
      if (mc) {
        csv += ',' + std::to_string(r.n_samples) + ',' + fmt_g12(r.se_ab) +
               ',' + fmt_g12(r.se_a) + ',' + fmt_g12(r.se_b);
      }
      csv += '\n';
    }
    write_file(opt.out_dir / "correlations.csv", csv);
    log << "correlations: " << rows.size() << " rows -> correlations.csv\n";
  } else {
    json out_rows = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json j = expectation_to_json(reports[i]);
      j["m_a"] = Setting(rows[i].a).radians();
      j["m_b"] = Setting(rows[i].b).radians();
      out_rows.push_back(std::move(j));
    }
    const json top = {{"subcommand", "correlations"},
                      {"model", cfg.model},
                      {"rows", out_rows}};
    write_file(opt.out_dir / "correlations.json", dump_json(top));
    log << "correlations: " << rows.size() << " rows -> correlations.json\n";
  }
}

void run_chsh(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  const ConditionalDensity d = cfg.build_density();
  const Setting a(require_setting(cfg.settings, &SettingsSpec::a, "a"));
  const Setting a_alt(
      require_setting(cfg.settings, &SettingsSpec::a_alt, "a_alt"));
  const Setting b(require_setting(cfg.settings, &SettingsSpec::b, "b"));
  const Setting b_alt(
      require_setting(cfg.settings, &SettingsSpec::b_alt, "b_alt"));
  const bool mc = cfg.method.kind == Method::Kind::MonteCarlo;
  const std::uint64_t seed = resolve_seed(cfg, opt);
  // same per-pair seed derivation as the one-shot combination evaluator
  auto term = [&](Setting x, Setting y, std::uint64_t idx) {
    Method m = Method::exact();
    if (mc) {
      m = Method::monte_carlo(cfg.method.samples, mix_seed(seed, idx),
                              opt.workers);
    }
    return expectations(d, x, y, m);
  };
  const std::array<ExpectationReport, 4> terms = {
      term(a, b, 0), term(a, b_alt, 1), term(a_alt, b, 2),
      term(a_alt, b_alt, 3)};
  const double s =
      terms[0].e_ab - terms[1].e_ab + terms[2].e_ab + terms[3].e_ab;
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv =
        "m_a,m_a_alt,m_b,m_b_alt,e_a_b,e_a_balt,e_aalt_b,e_aalt_balt,s\n";
    csv += fmt_g12(a.radians()) + ',' + fmt_g12(a_alt.radians()) + ',' +
           fmt_g12(b.radians()) + ',' + fmt_g12(b_alt.radians()) + ',' +
           fmt_g12(terms[0].e_ab) + ',' + fmt_g12(terms[1].e_ab) + ',' +
           fmt_g12(terms[2].e_ab) + ',' + fmt_g12(terms[3].e_ab) + ',' +
           fmt_g12(s) + '\n';
    write_file(opt.out_dir / "chsh.csv", csv);
    log << "chsh: s = " << fmt_g12(s) << " -> chsh.csv\n";
  } else {
    json top = {{"subcommand", "chsh"},
                {"model", cfg.model},
                {"m_a", a.radians()},
                {"m_a_alt", a_alt.radians()},
                {"m_b", b.radians()},
                {"m_b_alt", b_alt.radians()},
                {"s", s}};
    json jt = json::array();
    for (const ExpectationReport& r : terms) jt.push_back(expectation_to_json(r));
    top["terms"] = jt;
    write_file(opt.out_dir / "chsh.json", dump_json(top));
    log << "chsh: s = " << fmt_g12(s) << " -> chsh.json\n";
  }
}

void run_violation(const RunConfig& cfg, const RunOptions& opt,
                   std::ostream& log) {
  const ConditionalDensity d = cfg.build_density();
  const std::vector<SettingTripleRow> rows = resolve_triples(cfg);
  const bool mc = cfg.method.kind == Method::Kind::MonteCarlo;
  std::vector<ViolationReport> reports(rows.size());
  parallel_rows(rows.size(), rows.size() > 1 ? opt.workers : 1,
                [&](std::size_t i) {
                  reports[i] = marginal_violation(
                      d, Setting(rows[i].a), Setting(rows[i].b),
                      Setting(rows[i].b_alt),
                      row_method(cfg, opt, i, rows.size() > 1));
                });
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv = "m_a,m_b,m_b_alt,delta_a";
    if (mc) csv += ",se_delta";
    csv += '\n';
    for (const ViolationReport& r : reports) {
      csv += fmt_g12(r.m_a.radians()) + ',' + fmt_g12(r.m_b.radians()) + ',' +
             fmt_g12(r.m_b_alt.radians()) + ',' + fmt_g12(r.delta_a);
      if (mc) csv += ',' + fmt_g12(r.se_delta);
      csv += '\n';
    }
    write_file(opt.out_dir / "violation.csv", csv);
    log << "violation: " << rows.size() << " rows -> violation.csv\n";
  } else {
    json out_rows = json::array();
    for (const ViolationReport& r : reports) {
      out_rows.push_back(violation_to_json(r));
    }
    const json top = {{"subcommand", "violation"},
                      {"model", cfg.model},
                      {"rows", out_rows}};
    write_file(opt.out_dir / "violation.json", dump_json(top));
    log << "violation: " << rows.size() << " rows -> violation.json\n";
  }
}

// Per-triple mechanism decomposition. Nonlocal-deterministic densities report
// transition sets, the detailed-balance residual and the two matching shift
// computations; superdeterministic densities report the fixed-partition
// marginal shift and the reshuffle mass. Each row names the mechanism that
// fired and leaves the other family's columns empty.
struct TransitionRow {
  PartitionReport part;
  TransitionReport trans;
  bool nonlocal = false;
  double residual = 0.0;
  double shift_via_transitions = 0.0;
  double shift_via_supports = 0.0;
  double fixed_partition_shift = 0.0;
  double reshuffle = 0.0;
  double delta_a = 0.0;
};

void run_transitions(const RunConfig& cfg, const RunOptions& opt,
                     std::ostream& log) {
  const ConditionalDensity d = cfg.build_density();
  const std::vector<SettingTripleRow> rows = resolve_triples(cfg);
  const bool nonlocal =
      d.model().family() == CausalFamily::NonlocalDeterministic;
  std::vector<TransitionRow> out(rows.size());
  parallel_rows(rows.size(), rows.size() > 1 ? opt.workers : 1,
                [&](std::size_t i) {
                  const Setting a(rows[i].a), b(rows[i].b),
                      b_alt(rows[i].b_alt);
                  TransitionRow& r = out[i];
                  r.part = partition(d, a, b, b_alt);
                  r.trans = transitions(d, a, b, b_alt);
                  r.nonlocal = nonlocal;
                  if (nonlocal) {
                    r.residual = detailed_balance_residual(d, r.trans);
                    const NonlocalShift sh =
                        marginal_shift_nonlocal(d, a, b, b_alt);
                    r.shift_via_transitions = sh.via_transitions;
                    r.shift_via_supports = sh.via_supports;
                  } else {
                    r.fixed_partition_shift = marginal_shift_sd(d, a, b, b_alt);
                    r.reshuffle = reshuffle_mass(d, a, b, b_alt);
                  }
                  r.delta_a =
                      marginal_violation(d, a, b, b_alt, Method::exact())
                          .delta_a;
                });

  const char* mech_nl = "transition-sets";
  const char* mech_sd = "reshuffle";
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv =
        "m_a,m_b,m_b_alt,family,mechanism,measure_plus_minus,"
        "measure_minus_plus,residual,shift_via_transitions,shift_via_supports,"
        "fixed_partition_shift,reshuffle_mass,delta_a\n";
    for (const TransitionRow& r : out) {
      csv += fmt_g12(r.trans.m_a.radians()) + ',' +
             fmt_g12(r.trans.m_b.radians()) + ',' +
             fmt_g12(r.trans.m_b_alt.radians()) + ',';
      csv += causal_family_name(r.trans.family);
      csv += ',';
      if (r.nonlocal) {
        csv += mech_nl;
        csv += ',' + fmt_g12(r.trans.measure_plus_minus) + ',' +
               fmt_g12(r.trans.measure_minus_plus) + ',' +
               fmt_g12(r.residual) + ',' + fmt_g12(r.shift_via_transitions) +
               ',' + fmt_g12(r.shift_via_supports) + ",,," +
               fmt_g12(r.delta_a);
      } else {
        csv += mech_sd;
        csv += ",,,,,," + fmt_g12(r.fixed_partition_shift) + ',' +
               fmt_g12(r.reshuffle) + ',' + fmt_g12(r.delta_a);
      }
      csv += '\n';
    }
    write_file(opt.out_dir / "transitions.csv", csv);
    log << "transitions: " << rows.size() << " rows -> transitions.csv\n";
  } else {
    json out_rows = json::array();
    for (const TransitionRow& r : out) {
      json j = transition_to_json(r.trans);
      j["partition"] = partition_to_json(r.part);
      j["mechanism"] = r.nonlocal ? mech_nl : mech_sd;
      if (r.nonlocal) {
        j["residual"] = r.residual;
        j["shift_via_transitions"] = r.shift_via_transitions;
        j["shift_via_supports"] = r.shift_via_supports;
      } else {
        j["fixed_partition_shift"] = r.fixed_partition_shift;
        j["reshuffle_mass"] = r.reshuffle;
      }
      j["delta_a"] = r.delta_a;
      out_rows.push_back(std::move(j));
    }
    const json top = {{"subcommand", "transitions"},
                      {"model", cfg.model},
                      {"rows", out_rows}};
    write_file(opt.out_dir / "transitions.json", dump_json(top));
    log << "transitions: " << rows.size() << " rows -> transitions.json\n";
  }

  // plot companion, always long-format CSV: every named set as rho-weighted
  // pieces; primed halves weighed under the primed conditional
  std::vector<PlotRow> plot;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Setting a(rows[i].a), b(rows[i].b), b_alt(rows[i].b_alt);
    const DensitySlice rho = d.slice(a, b);
    const DensitySlice rho_alt = d.slice(a, b_alt);
    const TransitionRow& r = out[i];
    const double ca = a.radians(), cb = b.radians(), cba = b_alt.radians();
    append_set_rows(plot, ca, cb, cba, "s_a_plus", r.part.s_a_plus, rho);
    append_set_rows(plot, ca, cb, cba, "s_a_minus", r.part.s_a_minus, rho);
    append_set_rows(plot, ca, cb, cba, "s_alt_a_plus", r.part.s_alt_a_plus,
                    rho_alt);
    append_set_rows(plot, ca, cb, cba, "s_alt_a_minus", r.part.s_alt_a_minus,
                    rho_alt);
    append_set_rows(plot, ca, cb, cba, "t_plus_minus", r.trans.t_plus_minus,
                    rho);
    append_set_rows(plot, ca, cb, cba, "t_minus_plus", r.trans.t_minus_plus,
                    rho);
  }
  write_file(opt.out_dir / "transitions_sets.csv", plotdata_csv(plot));
  log << "transitions: " << plot.size() << " set pieces -> transitions_sets.csv\n";
}

void run_mechanisms(const RunConfig& cfg, const RunOptions& opt,
                    std::ostream& log) {
  const std::vector<ConditionalDensity> densities = cfg.build_densities();
  const Setting a(require_setting(cfg.settings, &SettingsSpec::a, "a"));
  const Setting b(require_setting(cfg.settings, &SettingsSpec::b, "b"));
  Method m = Method::exact();
  if (cfg.method.kind == Method::Kind::MonteCarlo) {
    m = Method::monte_carlo(cfg.method.samples, resolve_seed(cfg, opt),
                            opt.workers);
  }
  const MechanismDependenceReport rep = mechanism_dependence(densities, a, b, m);
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string table = "mechanism_i,mechanism_j,p_pp,p_pm,p_mp,p_mm\n";
    for (const MechanismEntry& e : rep.table) {
      table += std::to_string(e.mechanism.i) + ',' +
               std::to_string(e.mechanism.j) + ',' + fmt_g12(e.joint[0]) +
               ',' + fmt_g12(e.joint[1]) + ',' + fmt_g12(e.joint[2]) + ',' +
               fmt_g12(e.joint[3]) + '\n';
    }
    write_file(opt.out_dir / "mechanisms.csv", table);
    std::string pairs = "first,second,tv\n";
    for (const auto& p : rep.pairwise) {
      pairs += std::to_string(p.first) + ',' + std::to_string(p.second) + ',' +
               fmt_g12(p.tv) + '\n';
    }
    write_file(opt.out_dir / "mechanisms_pairs.csv", pairs);
    log << "mechanisms: max_tv = " << fmt_g12(rep.max_tv)
        << " -> mechanisms.csv, mechanisms_pairs.csv\n";
  } else {
    json top = mechanism_to_json(rep);
    top["subcommand"] = "mechanisms";
    top["model"] = cfg.model;
    top["m_a"] = a.radians();
    top["m_b"] = b.radians();
    write_file(opt.out_dir / "mechanisms.json", dump_json(top));
    log << "mechanisms: max_tv = " << fmt_g12(rep.max_tv)
        << " -> mechanisms.json\n";
  }
}

std::vector<int> build_message_bits(const TelephoneSpec& t,
                                    std::uint64_t seed) {
  std::vector<int> bits;
  if (t.message_bits) {
    for (char c : *t.message_bits) {
      if (c != '0' && c != '1') {
        throw ConfigError("telephone.message_bits must contain only 0 and 1");
      }
      bits.push_back(c - '0');
    }
  } else if (t.message_ascii) {
    for (unsigned char byte : *t.message_ascii) {
      for (int k = 7; k >= 0; --k) bits.push_back((byte >> k) & 1);
    }
  } else if (t.random_bits) {
    RngStream r = RngStream::substream(seed, 0x4d455353u);  // message stream
    for (std::uint64_t k = 0; k < *t.random_bits; ++k) {
      bits.push_back(static_cast<int>(r.next_u64() & 1u));
    }
  }
  if (bits.empty()) throw ConfigError("telephone message is empty");
  return bits;
}

void run_telephone(const RunConfig& cfg, const RunOptions& opt,
                   std::ostream& log) {
  if (!cfg.telephone) throw ConfigError("telephone block is required");
  const TelephoneSpec& t = *cfg.telephone;
  if (t.log_pairs && !t.record_pairs) {
    throw ConfigError("telephone.log_pairs requires telephone.record_pairs");
  }
  const ConditionalDensity d = cfg.build_density();
  const std::uint64_t seed = opt.seed.value_or(t.seed);
  const ChannelConfig ch{d.model_ptr(),
                         d,
                         Setting(t.m_a),
                         Setting(t.bit0),
                         Setting(t.bit1),
                         t.pairs_per_bit,
                         t.threshold,
                         seed,
                         t.nonlocal_diagnostic,
                         t.record_pairs};
  const std::vector<int> bits = build_message_bits(t, seed);
  const TransmissionLog tlog = transmit(ch, bits);
  const CoincidenceAudit audit = coincidence_audit(tlog, ch);
  const double p0 = ch.exact_marginal_plus(0);
  const double p1 = ch.exact_marginal_plus(1);

  json summary = {{"n_bits", bits.size()},
                  {"pairs_per_bit", tlog.pairs_per_bit},
                  {"errors", tlog.error_count()},
                  {"ber", tlog.bit_error_rate()},
                  {"mi_bits", audit.mutual_information_bits},
                  {"functional_independence", audit.functional_independence},
                  {"p0", p0},
                  {"p1", p1},
                  {"gap", std::abs(p1 - p0)},
                  {"threshold", t.threshold}};
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv =
        "n_bits,pairs_per_bit,errors,ber,mi_bits,functional_independence,"
        "p0,p1,gap,threshold\n";
    csv += std::to_string(bits.size()) + ',' +
           std::to_string(tlog.pairs_per_bit) + ',' +
           std::to_string(tlog.error_count()) + ',' +
           fmt_g12(tlog.bit_error_rate()) + ',' +
           fmt_g12(audit.mutual_information_bits) + ',' +
           (audit.functional_independence ? "true" : "false") + ',' +
           fmt_g12(p0) + ',' + fmt_g12(p1) + ',' + fmt_g12(std::abs(p1 - p0)) +
           ',' + fmt_g12(t.threshold) + '\n';
    write_file(opt.out_dir / "telephone_summary.csv", csv);
    log << "telephone: ber = " << fmt_g12(tlog.bit_error_rate())
        << " -> telephone_summary.csv\n";
  } else {
    summary["subcommand"] = "telephone";
    summary["model"] = cfg.model;
    write_file(opt.out_dir / "telephone_summary.json", dump_json(summary));
    log << "telephone: ber = " << fmt_g12(tlog.bit_error_rate())
        << " -> telephone_summary.json\n";
  }

  std::string lines;
  for (std::size_t k = 0; k < tlog.bits.size(); ++k) {
    const BitRecord& rec = tlog.bits[k];
    json rec_j = {{"bit", k},
                  {"sent", rec.sent},
                  {"decoded", rec.decoded},
                  {"n_plus", rec.n_plus},
                  {"p_hat", rec.p_hat}};
    if (t.log_pairs) {
      const std::size_t base = k * tlog.pairs_per_bit;
      json lam = json::array();
      json outc = json::array();
      for (std::size_t p = 0; p < tlog.pairs_per_bit; ++p) {
        lam.push_back(tlog.pair_lambdas[base + p]);
        outc.push_back(static_cast<int>(tlog.pair_outcomes[base + p]));
      }
      rec_j["lambdas"] = std::move(lam);
      rec_j["outcomes"] = std::move(outc);
    }
    lines += rec_j.dump();
    lines += '\n';
  }
  write_file(opt.out_dir / "telephone_log.jsonl", lines);
  log << "telephone: " << tlog.bits.size() << " records -> telephone_log.jsonl\n";
}

void run_audit(const RunConfig& cfg, const RunOptions& opt,
               std::ostream& log) {
  const std::shared_ptr<const HVModel> model = [&] {
    try {
      return make_model(cfg.model);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.model: ") + e.what());
    }
  }();
  std::vector<SettingTriple> triples;
  for (const SettingTripleRow& r : resolve_triples(cfg)) {
    triples.push_back(
        {Setting(r.a), Setting(r.b), Setting(r.b_alt)});
  }
  const ProbePlan plan{cfg.audit.grid_points, cfg.audit.include_outcome_pieces};
  const AuditReport rep = functional_locality_audit(*model, triples, plan);
  json top = audit_to_json(rep);
  top["subcommand"] = "audit";
  top["model"] = cfg.model;
  write_file(opt.out_dir / "audit.json", dump_json(top));
  log << "audit: " << (rep.passes_locality ? "passes" : "FAILS")
      << " functional locality, " << rep.witnesses.size()
      << " witnesses -> audit.json\n";
  if (resolve_format(cfg, opt) == OutputFormat::Csv) {
    std::string csv = "lambda,wing,local,distant,distant_alt,before,after\n";
    for (const LocalityWitness& w : rep.witnesses) {
      csv += fmt_g12(lambda_code(w.lambda)) + ',' + w.wing + ',' +
             fmt_g12(w.local.radians()) + ',' + fmt_g12(w.distant.radians()) +
             ',' + fmt_g12(w.distant_alt.radians()) + ',' +
             std::to_string(sign(w.before)) + ',' +
             std::to_string(sign(w.after)) + '\n';
    }
    write_file(opt.out_dir / "audit_witnesses.csv", csv);
    log << "audit: " << rep.witnesses.size()
        << " witnesses -> audit_witnesses.csv\n";
  }
}

}  // namespace

fs::path resolve_out_dir(const std::string& cli_arg, const RunConfig& cfg) {
  if (!cli_arg.empty()) return cli_arg;
  if (!cfg.output.dir.empty()) return cfg.output.dir;
  if (const char* env = std::getenv("BELLHV_OUT");
      env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "correlations", "chsh",      "violation", "transitions",
      "mechanisms",   "telephone", "audit"};
  return names;
}

void run_subcommand(const std::string& name, const RunConfig& cfg,
                    const RunOptions& opt, std::ostream& log) {
  if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);
  if (name == "correlations") return run_correlations(cfg, opt, log);
  if (name == "chsh") return run_chsh(cfg, opt, log);
  if (name == "violation") return run_violation(cfg, opt, log);
  if (name == "transitions") return run_transitions(cfg, opt, log);
  if (name == "mechanisms") return run_mechanisms(cfg, opt, log);
  if (name == "telephone") return run_telephone(cfg, opt, log);
  if (name == "audit") return run_audit(cfg, opt, log);
  throw ConfigError("unknown subcommand: " + name);
}

}  // namespace bellhv::cli
