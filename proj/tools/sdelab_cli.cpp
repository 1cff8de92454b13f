#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdelab/cli/presets.hpp"
#include "sdelab/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sdelab: coupled-noise error experiments for SDE and SPDE schemes"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool override_cfl = false;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (TOML)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--threads", threads, "Worker threads (default: SDELAB_THREADS or all cores)");
  run->add_option("--out", out, "Output path prefix (.csv / .json are appended)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_flag("--override-cfl", override_cfl, "Run lattice schemes that violate m >= 2 T n^2");

  app.add_subcommand("list-presets", "Print the built-in coefficient presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("list-presets")) {
    std::cout << sdelab::list_presets();
    return 0;
  }
  sdelab::RunFlags flags{seed, threads, out, format, override_cfl};
  return sdelab::run_config_file(config_path, flags, std::cout, std::cerr);
}
