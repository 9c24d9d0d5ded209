#pragma once

// Bundled figure pipelines: fig1 ... fig5.

#include <string>
#include <vector>

#include "hypercqed/cli/config.hpp"
#include "hypercqed/cli/tasks.hpp"

namespace hypercqed::cli {

/// Configs that make up a figure; throws InvalidSpecError for unknown names.
std::vector<RunConfig> figure_configs(const std::string& name);
std::vector<std::string> figure_names();

struct Verdict {
  std::string check;
  bool pass = false;
  std::string detail;
};

/// Runs every config of the figure into ctx.out/<name>/<config output> and
/// writes ctx.out/<name>/verdict.json. Returns the verdicts.
std::vector<Verdict> reproduce(const std::string& name, RunContext& ctx);

}  // namespace hypercqed::cli
