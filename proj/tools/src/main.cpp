// hypercqed: run a JSON-configured task or reproduce a figure dataset.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypercqed/cli/config.hpp"
#include "hypercqed/cli/reproduce.hpp"
#include "hypercqed/cli/tasks.hpp"
#include "hypercqed/error.hpp"

namespace {

int fail(std::string_view kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hypercqed;
  CLI::App app{"Hyperbolic-lattice circuit QED toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::library_version());

  std::string output_dir;
  unsigned threads = 1;
  bool strict = false;
  app.fallthrough();
  app.add_option("--output-dir", output_dir, "Output directory (overrides the config and HYPERCQED_OUTPUT_DIR)");
  app.add_option("--threads", threads, "Worker threads for scans")->check(CLI::Range(1u, 1024u));
  app.add_flag("--strict", strict, "Promote warnings to errors");

  auto* run = app.add_subcommand("run", "Run one task from a JSON config");
  std::string config_path;
  run->add_option("config", config_path, "Config file")->required();

  auto* repro = app.add_subcommand("reproduce", "Regenerate the data behind a figure (fig1 ... fig5)");
  std::string figure;
  repro->add_option("figure", figure, "Figure name")->required()->check(CLI::IsMember(cli::figure_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const char* env_out = std::getenv("HYPERCQED_OUTPUT_DIR");
  try {
    cli::RunContext ctx;
    ctx.threads = threads;
    ctx.strict = strict;
    if (*run) {
      auto cfg = cli::load_config(config_path);
      if (!output_dir.empty()) cfg.output = output_dir;
      else if (env_out && *env_out) cfg.output = env_out;
      ctx.out = cfg.output;
      const auto summary = cli::run(cfg, ctx);
      std::cout << summary.dump(1) << '\n';
      for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
      return 0;
    }
    ctx.out = !output_dir.empty() ? output_dir : (env_out && *env_out ? env_out : "hypercqed-out");
    const auto verdicts = cli::reproduce(figure, ctx);
    int failed = 0;
    for (const auto& v : verdicts) {
      std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", v.check.c_str(), v.detail.c_str());
      failed += !v.pass;
    }
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
    if (strict && !ctx.warnings.empty()) return fail("domain", "warnings promoted to errors (--strict)");
    if (failed) {
      std::cerr << nlohmann::json{{"error", "threshold"}, {"figure", figure}, {"failed_checks", failed}}.dump() << '\n';
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
