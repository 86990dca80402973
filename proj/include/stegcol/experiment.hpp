#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stegcol::cli {

/// Raised for anything wrong with the experiment configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Keys accepted by a command (bench, corpus, steg), with defaults.
const std::vector<KeySpec>& command_keys(std::string_view command);

/// Flat key=value configuration. Blank lines and lines starting with '#' are ignored.
class Config {
 public:
  static Config parse(const std::string& text);

  /// Defaults for the command, then the file, then overrides. Unknown keys throw ConfigError.
  static Config resolve(std::string_view command, const std::optional<std::string>& file_text,
                        const std::map<std::string, std::string>& overrides);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated list; empty string gives an empty list.
  std::vector<std::string> list(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// Sorted key=value lines under a one-line comment naming the command.
  std::string serialize(std::string_view command) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Name of the resolved-config snapshot written next to every output set.
inline constexpr const char* kSnapshotName = "config.resolved.txt";

/// traces.csv, stats.csv, ranksum.csv.
void cmd_bench(const Config& config, std::ostream& log);
/// PPM tree and manifest.csv.
void cmd_corpus(const Config& config, std::ostream& log);
/// results.csv, summary.csv and optionally features.csv.
void cmd_steg(const Config& config, std::ostream& log);

/// Resolves the configuration, runs the command and maps failures to exit codes.
int run_command(std::string_view command, const std::optional<std::filesystem::path>& config_path,
                const std::map<std::string, std::string>& overrides, std::ostream& log);

/// Write to a temporary sibling, then rename over the destination.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Float formatting used in every CSV (17 significant digits).
std::string csv_real(double value);

}  // namespace stegcol::cli
