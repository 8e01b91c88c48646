// Command-line driver: certification, spectral sweeps, Hardy probes and
// multiplier-identity checks for a scenario config. Verdicts are data, not
// process failures: only operational errors exit nonzero.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "absentia/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"absentia: absence-of-eigenvalue certification for 2D magnetic "
               "Schrodinger operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool dump_matrix = false;

  for (const char* name : {"certify", "spectrum", "hardy", "identities", "all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario config file")->required();
    sub->add_option("--out", out_dir, "output directory (default from config)");
    sub->add_option("--seed", seed, "solver seed override")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_flag("--dump-matrix", dump_matrix,
                  "dump assembled matrices in matrix-market format");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const absentia::Command cmd =
        absentia::parse_command(app.get_subcommands().front()->get_name());
    const absentia::ScenarioConfig cfg = absentia::parse_config(config_path);
    absentia::RunOptions opts;
    opts.out_dir = out_dir.empty() ? cfg.output.dir : out_dir;
    if (seed_set) opts.seed_override = seed;
    opts.dump_matrix = dump_matrix;

    const nlohmann::ordered_json report =
        absentia::build_report(cmd, cfg, opts);
    const std::string path = absentia::write_outputs(report, opts.out_dir);
    absentia::print_summary(report, std::cout);
    std::cout << "report written to " << path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
