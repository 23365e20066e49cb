#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = heatstring::cli;
  CLI::App app{"Heated-string spectral simulator and verification lab"};
  app.require_subcommand(1, 1);

  cli::CommandOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  const char* names[] = {"simulate",   "eigen-report", "asymptotics-verify",
                         "duhamel",    "decay-fit",    "thresholds"};
  const char* help[] = {"integrate the truncated system and write trajectory.csv",
                        "per-mode spectra and asymptotic errors to eigen_report.csv",
                        "log-log slopes of the asymptotic errors, pass/fail",
                        "Picard iteration of the Duhamel map against direct integration",
                        "fit decay rates of a run against alpha",
                        "N0, alpha1, alpha2 and alpha"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", opts.config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "seed for random presets (overrides [initial] seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  opts.command = chosen->get_name();
  if (chosen->count("--out") > 0) opts.out_dir = out_dir;
  if (chosen->count("--seed") > 0) opts.seed = seed;
  return cli::run_command(opts, std::cout, std::cerr);
}
