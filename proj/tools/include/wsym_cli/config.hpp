#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wsym_cli/located_json.hpp"

namespace wsym::cli {

inline const std::vector<std::string> kCommands = {"check-tower", "moser", "shrink", "product-control", "loop-check"};
inline const std::vector<std::string> kFormats = {"csv", "json", "text"};

struct Tolerances {
  double rank_tol = 1e-10;
  double closed_tol = 1e-6;
  double sing_tol = 1e-8;
  double cond_cap = 1e6;
  double dt = 1e-3;
  int quad_nodes = 16;
};

/// One run of the tool. Paths in the file are relative to the file's directory
/// for input and to the working directory for output.
struct RunConfig {
  std::string command;
  std::string config_path;
  /// As written in the config, for reports.
  std::string input_as_written;
  std::filesystem::path input;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  std::vector<std::string> formats = kFormats;
  json params = json::object();
};

/// Parameter keys accepted under "params" for each command.
const std::vector<std::string>& params_for(const std::string& command);

/// Throws InputError listing every violation.
RunConfig load_config(const std::string& path);

/// Diagnostics for a config document without building anything.
std::vector<Diagnostic> check_config(const LocatedJson& src);

}  // namespace wsym::cli
