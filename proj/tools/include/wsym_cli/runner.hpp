#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wsym_cli/config.hpp"
#include "wsym_cli/spec.hpp"

namespace wsym::cli {

enum ExitCode { kPass = 0, kCheckFailed = 1, kInputError = 2 };

struct RunOutcome {
  int exit_code = kPass;
  json report;
  std::string text;
  /// (file name, contents)
  std::vector<std::pair<std::string, std::string>> csv_files;
};

/// Runs the configured pipeline without touching the filesystem beyond
/// reading the input spec. Throws InputError; library errors raised by the
/// pipeline become an exit-1 outcome carrying the error payload.
RunOutcome execute(const RunConfig& cfg, bool dump_trajectories = false);

/// Writes report.json, report.txt and the CSV files selected by formats.
std::vector<std::filesystem::path> write_outputs(const RunOutcome& outcome, const std::filesystem::path& dir,
                                                 const std::vector<std::string>& formats);

/// Validates a run config (and the spec it names) or a bare spec document.
/// Prints every violation followed by "N errors"; returns 0 or 2.
int validate_path(const std::string& path, std::ostream& out);

/// %.17g, with inf/nan spelled out.
std::string format_double(double x);

}  // namespace wsym::cli
