#include "lobeq_cli/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

namespace {

// LOB_LOG_LEVEL in {error, info, debug}; anything else keeps info.
void configure_logging() {
  auto logger = spdlog::stderr_color_mt("lobeq");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("LOB_LOG_LEVEL")) {
    const std::string level = env;
    if (level == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else if (level != "info") {
      spdlog::warn("ignoring unknown LOB_LOG_LEVEL '{}'", level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Equilibrium limit order book model: shapes, spreads, simulation and trade signatures"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  for (const char* name : {"shape", "spread", "simulate", "signature", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the configured seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  lobeq::cli::json doc;
  try {
    std::ifstream in(config_path);
    doc = lobeq::cli::json::parse(in);
  } catch (const std::exception& e) {
    spdlog::error("cannot read {}: {}", config_path, e.what());
    return lobeq::cli::kConfigError;
  }
  return lobeq::cli::run_command(command, std::move(doc), out_dir, seed);
}
