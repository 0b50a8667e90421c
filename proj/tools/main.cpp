#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "bellhv/config.hpp"
#include "bellhv/errors.hpp"
#include "bellhv/runner.hpp"

namespace {

// 0 success, 2 unusable configuration, 3 well-formed but degenerate request
// (zero normalization, closed channel, wrong model family), 1 anything else.
int dispatch(const std::string& subcommand, const std::string& config_path,
             const std::string& out_arg,
             const std::optional<std::uint64_t>& seed_arg,
             const std::string& format_arg, int workers) {
  using namespace bellhv;
  using namespace bellhv::cli;
  try {
    const RunConfig cfg = RunConfig::from_file(config_path);
    RunOptions opt;
    opt.out_dir = resolve_out_dir(out_arg, cfg);
    if (!format_arg.empty()) opt.format = format_from_name(format_arg);
    if (seed_arg) opt.seed = *seed_arg;
    opt.workers = workers < 1 ? 1 : workers;
    run_subcommand(subcommand, cfg, opt, std::cout);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateDistributionError& e) {
    std::cerr << "degenerate distribution: " << e.what() << '\n';
    return 3;
  } catch (const ChannelError& e) {
    std::cerr << "channel error: " << e.what() << '\n';
    return 3;
  } catch (const NotApplicableError& e) {
    std::cerr << "not applicable: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic hidden-variables laboratory for the two-wing "
               "Bell scenario"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_arg;
  std::string format_arg;
  std::optional<std::uint64_t> seed_arg;
  int workers = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_arg,
                    "output directory (default: config output.dir, then "
                    "$BELLHV_OUT, then .)");
    sub->add_option("--seed", seed_arg, "override all seeds in the config");
    sub->add_option("--format", format_arg, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads (results identical "
                    "for any value)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* correlations = app.add_subcommand(
      "correlations", "joint and marginal outcome statistics per setting pair");
  CLI::App* chsh_cmd = app.add_subcommand(
      "chsh", "four-setting correlator combination");
  CLI::App* violation = app.add_subcommand(
      "violation", "marginal dependence of wing A on the distant setting");
  CLI::App* transitions = app.add_subcommand(
      "transitions",
      "outcome-sign partition, transition sets and shift decomposition");
  CLI::App* mechanisms = app.add_subcommand(
      "mechanisms", "distribution drift across setting mechanisms");
  CLI::App* telephone = app.add_subcommand(
      "telephone", "setting-to-marginal channel transmission and audit");
  CLI::App* audit = app.add_subcommand(
      "audit", "functional locality audit of the outcome indicators");
  for (CLI::App* sub : {correlations, chsh_cmd, violation, transitions,
                        mechanisms, telephone, audit}) {
    add_common(sub);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  return dispatch(name, config_path, out_arg, seed_arg, format_arg, workers);
}
