#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "edgesync/config.hpp"

namespace edgesync {

enum ExitCode : int {
    kExitOk = 0,
    kExitPropertyFailure = 1,
    kExitUsage = 2,
    kExitDivergence = 3,
};

/// Output directory: the --out flag, else $EDGESYNC_OUT, else the config's
/// `dir` (relative paths resolved against the config file's directory).
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const RunConfig& cfg, const std::filesystem::path& config_dir);

/// Settings of the `reproduce-paper` command.
RunConfig paper_run_config();

/// First window start for the PE report of `reproduce-paper`.
inline constexpr double kPaperPeBegin = 10.0;

int cmd_simulate(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out_flag,
                 std::ostream& out, std::ostream& err);
int cmd_reproduce_paper(const std::optional<std::filesystem::path>& out_flag, std::ostream& out, std::ostream& err);
int cmd_check_pe(const std::filesystem::path& config, double window, std::optional<double> stride,
                 const std::optional<std::filesystem::path>& out_flag, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edgesync
