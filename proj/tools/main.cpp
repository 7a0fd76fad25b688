// Command line front end: runs scenario configs, lists profiles, and
// exposes the built-in numerical selftest.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gfastsim/profile.hpp"
#include "gfastsim/scenario.hpp"
#include "gfastsim/selftest.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            int jobs, bool quiet) {
  gfastsim::Scenario scenario = gfastsim::load_config(config_path);
  gfastsim::RunOptions options;
  options.out_dir = out_dir;
  options.jobs = jobs;
  options.log = quiet ? nullptr : &std::cerr;
  gfastsim::run_scenario(scenario, options);
  if (!quiet) {
    std::cout << "wrote " << (out_dir.empty() ? scenario.out_dir : out_dir)
              << "/rates.csv\n";
  }
  return 0;
}

int cmd_profiles() {
  for (const std::string& name : gfastsim::profile_names()) {
    gfastsim::SystemProfile p = gfastsim::make_profile(name);
    std::cout << p.name << ": " << p.tone_count << " tones x "
              << p.tone_width_hz << " Hz, band " << p.start_freq_hz / 1e6
              << ".." << p.stop_freq_hz / 1e6 << " MHz, " << p.symbol_rate_hz
              << " sym/s, cap " << p.bit_cap << " bit, "
              << p.total_power_dbm << " dBm\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vectored multi-pair wireline link simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config,--config", config_path,
                  "scenario config file (key=value)")
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "suppress progress and warnings");

  CLI::App* profiles = app.add_subcommand("profiles", "list system profiles");
  CLI::App* selftest =
      app.add_subcommand("selftest", "run built-in numerical checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (config_path.empty()) {
        std::cerr << "run: a config file is required\n";
        return 2;
      }
      return cmd_run(config_path, out_dir, jobs, quiet);
    }
    if (profiles->parsed()) return cmd_profiles();
    if (selftest->parsed())
      return gfastsim::selftest::run_all(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
