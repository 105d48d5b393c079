#include <iostream>

#include <CLI11.hpp>
#include <wsym/errors.hpp>

#include "wsym_cli/runner.hpp"

using namespace wsym::cli;

int main(int argc, char** argv) {
  CLI::App app{"Weak symplectic towers: compatibility checks, Moser charts and the shrink experiment", "wsym"};
  std::string command;
  std::string config;
  std::string output;
  std::uint64_t seed = 0;
  std::vector<std::string> formats;
  bool dump = false;
  std::vector<std::string> commands = kCommands;
  commands.push_back("validate");
  app.add_option("command", command, "check-tower | moser | shrink | product-control | loop-check | validate")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config, "Run config (JSON); for validate, a config or a spec document")
      ->required()
      ->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--output", output, "Output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  auto* fmt_opt = app.add_option("--format", formats, "Comma-separated subset of csv,json,text")
                      ->delimiter(',')
                      ->check(CLI::IsMember(kFormats));
  app.add_flag("--dump-trajectories", dump, "Also write sampled Moser trajectories as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (command == "validate") return validate_path(config, std::cout);

  try {
    RunConfig cfg = load_config(config);
    if (cfg.command != command) {
      std::cerr << config << ": /command: config is for '" << cfg.command << "', not '" << command << "'\n";
      return kInputError;
    }
    if (*out_opt) cfg.output = output;
    if (*seed_opt) cfg.seed = seed;
    if (*fmt_opt) cfg.formats = formats;
    const RunOutcome outcome = execute(cfg, dump);
    write_outputs(outcome, cfg.output, cfg.formats);
    std::cout << outcome.text;
    if (outcome.report.contains("error")) std::cerr << outcome.report["error"].dump() << "\n";
    return outcome.exit_code;
  } catch (const InputError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.str() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
