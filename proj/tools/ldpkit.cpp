#include <iostream>

#include <CLI11.hpp>

#include "ldp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ldpkit: small-noise SDE simulation, rate functions and condition audits"};
  app.require_subcommand(1);

  ldp::cli::RunOptions options;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("--config", options.config_path, "config file")->required();
  run->add_option("--set", options.overrides, "override KEY=VALUE or section.KEY=VALUE")
      ->take_all()
      ->allow_extra_args(false);
  run->add_option("--out", options.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "root seed (overrides the config)");
  run->add_flag("--quiet", options.quiet, "print nothing on success");

  app.add_subcommand("models", "list the built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ldp::cli::kValidation;
  }

  if (app.got_subcommand("models")) {
    ldp::cli::list_models(std::cout);
    return 0;
  }
  if (*seed_opt) options.seed = seed;
  return ldp::cli::run(options, std::cout, std::cerr).status;
}
