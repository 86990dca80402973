// Command-line front end: stegcol {bench|corpus|steg} [--config FILE] [--<key> VALUE ...]

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stegcol/experiment.hpp"

int main(int argc, char** argv) {
  using namespace stegcol::cli;

  CLI::App app{"Colorspace steganalysis experiments with Levy-flight grey wolf feature selection"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Command> commands;
  const std::map<std::string, std::string> descriptions = {
      {"bench", "compare optimizer variants on a benchmark function"},
      {"corpus", "generate a synthetic cover/stego corpus"},
      {"steg", "run the steganalysis pipeline on a corpus manifest"},
  };
  for (const auto& [name, text] : descriptions) {
    auto& cmd = commands[name];
    cmd.app = app.add_subcommand(name, text);
    cmd.app->add_option("--config", cmd.config_path, "key=value configuration file");
    for (const auto& key : command_keys(name)) {
      cmd.app->add_option("--" + key.name, cmd.values[key.name], key.help + " (default: " + key.default_value + ")");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (auto& [name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    std::map<std::string, std::string> overrides;
    for (const auto& key : command_keys(name)) {
      if (cmd.app->count("--" + key.name) > 0) overrides[key.name] = cmd.values[key.name];
    }
    std::optional<std::filesystem::path> config;
    if (!cmd.config_path.empty()) config = cmd.config_path;
    return run_command(name, config, overrides, std::cerr);
  }
  return kExitConfig;
}
