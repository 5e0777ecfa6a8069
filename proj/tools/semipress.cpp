#include <iostream>

#include "CLI11.hpp"
#include "semipress/experiment.hpp"

int main(int argc, char** argv) {
  using namespace semipress;
  CLI::App app{"Pressure and Bowen-root experiments for free semigroup actions"};
  app.require_subcommand(1);

  RunOverrides overrides;
  int workers = 0;
  std::string out_dir;
  std::uint64_t budget = 0;
  auto add_flags = [&](CLI::App* cmd) {
    cmd->add_option("--workers", workers, "worker threads for independent (N, delta, t) tasks")->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", out_dir, "output directory (overrides SEMIPRESS_OUT_DIR and output.dir)");
    cmd->add_option("--budget-words", budget, "words per level before a level is refused")->check(CLI::PositiveNumber);
  };

  std::string config;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config, "flat YAML config")->required();
  add_flags(run);
  auto* verify = app.add_subcommand("verify", "run the invariant battery for a config");
  verify->add_option("config", config, "flat YAML config")->required();
  add_flags(verify);
  auto* list = app.add_subcommand("list-systems", "print the built-in systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& name : catalog::names()) std::cout << name << "\n";
    return kExitOk;
  }
  if (workers > 0) overrides.workers = workers;
  if (!out_dir.empty()) overrides.out_dir = out_dir;
  if (budget > 0) overrides.budget_words = budget;
  if (run->parsed()) return run_command(config, overrides, std::cerr);
  return verify_command(config, overrides, std::cerr);
}
