#pragma once

// Task execution and run artifacts (data files, summary.json, manifest.json).

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercqed/cli/config.hpp"

namespace hypercqed::cli {

struct RunContext {
  std::filesystem::path out;
  unsigned threads = 1;
  bool strict = false;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;

  /// Opens out/name for writing and records it. CSV files start with a
  /// `# units:` comment line.
  std::ofstream open(const std::string& name);
  void warn(std::string msg);
};

/// Runs the configured task; returns the task summary (also written to
/// summary.json). Data files are deterministic for a given config.
nlohmann::json run_task(const RunConfig& cfg, RunContext& ctx);

/// run_task plus manifest.json {config, config_hash, version, task, threads,
/// wall_time_s, outputs, warnings}. With ctx.strict, warnings become a
/// DomainError after the artifacts are written.
nlohmann::json run(const RunConfig& cfg, RunContext& ctx);

const char* library_version() noexcept;

}  // namespace hypercqed::cli
