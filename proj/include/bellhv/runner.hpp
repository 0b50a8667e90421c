#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bellhv/config.hpp"

namespace bellhv::cli {

struct RunOptions {
  std::filesystem::path out_dir;             // already resolved
  std::optional<OutputFormat> format;        // overrides config
  std::optional<std::uint64_t> seed;         // overrides config seeds
  int workers = 1;
};

// Precedence: --out flag, then config output.dir, then $BELLHV_OUT, then ".".
std::filesystem::path resolve_out_dir(const std::string& cli_arg,
                                      const RunConfig& cfg);

const std::vector<std::string>& subcommand_names();

// Executes one subcommand and writes its artifacts under opt.out_dir. A brief
// deterministic summary goes to `log`. Throws ConfigError for unusable
// configurations; numeric degeneracies raise their library error types.
void run_subcommand(const std::string& name, const RunConfig& cfg,
                    const RunOptions& opt, std::ostream& log);

}  // namespace bellhv::cli
