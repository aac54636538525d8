#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rcal/config.hpp"

namespace rcal {

/// Subcommands understood by dispatch().
inline constexpr std::string_view kSubcommands[] = {"simulate", "gainmap", "slices",    "diagnostics",
                                                    "scan",     "robustness", "all"};

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutDirEnv = "RCAL_OUT_DIR";

/// Run one subcommand and write its CSVs plus manifest.cfg into
/// config.out_dir. Returns the files written. On any failure every file
/// written by this call is removed and the exception propagates.
std::vector<std::filesystem::path> dispatch(std::string_view subcommand, const RunConfig& config, std::ostream& log);

}  // namespace rcal
