#pragma once
/**
 * Scenario runner: parses flat key=value configs, builds binder topologies,
 * sweeps lengths/frequencies/alphas over methods and seeds, and writes
 * schema-stable CSV tables. Re-running a scenario is byte-identical.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfastsim/adaptive.hpp"
#include "gfastsim/channel.hpp"
#include "gfastsim/rate.hpp"

namespace gfastsim {

struct Scenario {
  enum class Topology { equal, spread };
  enum class Sweep { none, length, frequency, alpha };

  std::string profile = "gfast106";
  int lines = 10;
  Topology topology = Topology::equal;
  double length_m = 100.0;
  double length_min_m = 50.0;
  double length_max_m = 500.0;
  double length_step_m = 50.0;
  std::string cable_name = "cat5";
  CableModel cable;  // resolved, overrides applied
  Direction direction = Direction::upstream;
  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds = {1};
  Sweep sweep = Sweep::none;
  std::string out_dir = "out";
  int tone_step = 1;

  // sweep=alpha: synthetic symmetric channel, H_ii=1, H_ij=alpha.
  double alpha_min = 0.0;
  double alpha_max = 0.4;
  double alpha_step = 0.05;
  double snr_db = 40.0;

  // Optional adaptation run (writes learning.csv for the first seed).
  bool adapt_enabled = false;
  AdaptMode adapt_mode = AdaptMode::lms;
  double adapt_mu = 0.1;
  long adapt_iterations = 10000;
  int adapt_tone = -1;  // absolute tone index; -1 = middle active tone
};

Scenario parse_config(const std::string& text);
Scenario load_config(const std::string& path);

struct RunOptions {
  std::string out_dir;  // overrides scenario.out_dir when non-empty
  int jobs = 1;
  std::ostream* log = nullptr;  // warnings; defaults to stderr
};

void run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace gfastsim
