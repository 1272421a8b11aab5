#include "noncanon/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"noncanon: noncanonical field quantization experiments"};
  app.require_subcommand(1);
  std::string out;
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out, "output directory (overrides `out` in the config)");
  app.add_option("--seed", seed, "RNG seed (overrides `seed` in the config)");

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string config_path;
  run->add_option("config", config_path, "config file")->required();
  auto* list = app.add_subcommand("list", "list available experiments");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    std::cout << noncanon::list_experiments();
    return 0;
  }
  try {
    noncanon::RunConfig cfg = noncanon::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.out_dir = out;
    const int status = noncanon::run_to_directory(cfg, cfg.out_dir);
    std::cout << cfg.experiment << ": " << (status == 0 ? "PASS" : "FAIL") << " (report in " << cfg.out_dir
              << "/report.txt)\n";
    return status;
  } catch (const noncanon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
