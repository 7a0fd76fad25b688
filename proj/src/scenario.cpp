#include "gfastsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace gfastsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

Scenario parse_config(const std::string& text) {
  Scenario s;
  s.methods.clear();
  s.seeds.clear();

  bool saw_methods = false, saw_seeds = false;
  bool saw_length = false, saw_range = false, saw_lines = false;
  std::vector<std::string> method_tokens;
  PrecoderScaling scaling = PrecoderScaling::row_norm;
  bool integer_bits = false, use_delta_f = false;
  double thp_loss = 0.0;
  double chi_override_db = 0.0;
  bool saw_chi = false;
  struct Override { std::string key; double value; int line; };
  std::vector<Override> cable_overrides;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string stripped = raw.substr(0, raw.find('#'));
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(line, "expected key=value, got '" + stripped + "'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for key '" + key + "'");

    try {
      if (key == "profile") {
        make_profile(value);
        s.profile = value;
      } else if (key == "lines") {
        s.lines = static_cast<int>(parse_long(value, line));
        saw_lines = true;
      } else if (key == "length_m") {
        s.length_m = parse_double(value, line);
        saw_length = true;
      } else if (key == "length_min_m") {
        s.length_min_m = parse_double(value, line);
        saw_range = true;
      } else if (key == "length_max_m") {
        s.length_max_m = parse_double(value, line);
        saw_range = true;
      } else if (key == "length_step_m") {
        s.length_step_m = parse_double(value, line);
        saw_range = true;
      } else if (key == "cable") {
        make_cable(value);
        s.cable_name = value;
      } else if (key == "methods") {
        method_tokens = split(value, ',');
        saw_methods = true;
      } else if (key == "direction") {
        s.direction = direction_from_string(value);
      } else if (key == "seeds") {
        for (const std::string& t : split(value, ',')) {
          long v = parse_long(t, line);
          if (v < 0) fail(line, "seeds must be >= 0");
          s.seeds.push_back(static_cast<std::uint64_t>(v));
        }
        saw_seeds = true;
      } else if (key == "sweep") {
        if (value == "length") s.sweep = Scenario::Sweep::length;
        else if (value == "frequency") s.sweep = Scenario::Sweep::frequency;
        else if (value == "alpha") s.sweep = Scenario::Sweep::alpha;
        else fail(line, "unknown sweep '" + value + "'");
      } else if (key == "out_dir") {
        s.out_dir = value;
      } else if (key == "scaling") {
        scaling = precoder_scaling_from_string(value);
      } else if (key == "tone_step") {
        s.tone_step = static_cast<int>(parse_long(value, line));
      } else if (key == "rate_basis") {
        if (value == "symbol") use_delta_f = false;
        else if (value == "delta_f") use_delta_f = true;
        else fail(line, "rate_basis must be symbol or delta_f");
      } else if (key == "bit_loading") {
        if (value == "fractional") integer_bits = false;
        else if (value == "integer") integer_bits = true;
        else fail(line, "bit_loading must be fractional or integer");
      } else if (key == "thp_shaping_loss_db") {
        thp_loss = parse_double(value, line);
      } else if (key == "il_a0" || key == "il_a1" || key == "il_a2" ||
                 key == "sigma_fext_db" || key == "fext_breakpoint_mhz" ||
                 key == "fext_slope_hi") {
        cable_overrides.push_back({key, parse_double(value, line), line});
      } else if (key == "chi_fext_db") {
        chi_override_db = parse_double(value, line);
        saw_chi = true;
      } else if (key == "alpha_min") {
        s.alpha_min = parse_double(value, line);
      } else if (key == "alpha_max") {
        s.alpha_max = parse_double(value, line);
      } else if (key == "alpha_step") {
        s.alpha_step = parse_double(value, line);
      } else if (key == "snr_db") {
        s.snr_db = parse_double(value, line);
      } else if (key == "adapt") {
        s.adapt_mode = adapt_mode_from_string(value);
        s.adapt_enabled = true;
      } else if (key == "adapt_mu") {
        s.adapt_mu = parse_double(value, line);
      } else if (key == "adapt_iterations") {
        s.adapt_iterations = parse_long(value, line);
      } else if (key == "adapt_tone") {
        s.adapt_tone = static_cast<int>(parse_long(value, line));
      } else {
        fail(line, "unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(line, e.what());
    }
  }

  if (!saw_methods)
    throw ConfigError(
        "config is missing required keys: methods (comma-separated list; "
        "see README for the full key reference)");
  if (!saw_seeds) s.seeds = {1};

  // Resolve cable and overrides.
  s.cable = make_cable(s.cable_name);
  if (saw_chi) s.cable.chi_fext = chi_from_coupling_db(chi_override_db);
  for (const Override& o : cable_overrides) {
    if (o.key == "il_a0") s.cable.il_a0 = o.value;
    else if (o.key == "il_a1") s.cable.il_a1 = o.value;
    else if (o.key == "il_a2") s.cable.il_a2 = o.value;
    else if (o.key == "sigma_fext_db") s.cable.sigma_fext_db = o.value;
    else if (o.key == "fext_breakpoint_mhz") s.cable.fext_breakpoint_hz = o.value * 1e6;
    else if (o.key == "fext_slope_hi") s.cable.fext_slope_hi = o.value;
  }
  try {
    validate_cable(s.cable);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid cable parameters: ") + e.what());
  }

  // Topology selection.
  if (saw_length && saw_range)
    throw ConfigError("give either length_m or length_min_m/length_max_m/length_step_m, not both");
  if (s.sweep == Scenario::Sweep::length) {
    if (saw_length)
      throw ConfigError("sweep=length uses length_min_m/length_max_m/length_step_m, not length_m");
    s.topology = Scenario::Topology::equal;
  } else if (saw_range) {
    s.topology = Scenario::Topology::spread;
  } else {
    s.topology = Scenario::Topology::equal;
  }

  if (s.lines < 1) throw ConfigError("lines must be >= 1");
  if (!(s.length_m > 0)) throw ConfigError("length_m must be > 0");
  if (s.topology == Scenario::Topology::spread ||
      s.sweep == Scenario::Sweep::length) {
    if (!(s.length_step_m > 0) || s.length_max_m < s.length_min_m ||
        !(s.length_min_m > 0))
      throw ConfigError("invalid length range");
  }
  if (s.topology == Scenario::Topology::spread) {
    int points = static_cast<int>(
        std::floor((s.length_max_m - s.length_min_m) / s.length_step_m + 1e-9)) + 1;
    if (saw_lines && points != s.lines)
      throw ConfigError("lines=" + std::to_string(s.lines) +
                        " does not match the " + std::to_string(points) +
                        " lengths in the spread range");
    s.lines = points;
  }
  if (s.tone_step < 1) throw ConfigError("tone_step must be >= 1");
  if (s.sweep == Scenario::Sweep::alpha) {
    if (s.alpha_min < 0 || s.alpha_max >= 1.0 || s.alpha_max < s.alpha_min ||
        !(s.alpha_step > 0))
      throw ConfigError("invalid alpha range (need 0 <= min <= max < 1, step > 0)");
  }
  if (s.adapt_enabled) {
    if (!(s.adapt_mu > 0)) throw ConfigError("adapt_mu must be > 0");
    if (s.adapt_iterations < 1) throw ConfigError("adapt_iterations must be >= 1");
  }

  // Methods, validated against direction.
  for (const std::string& token : method_tokens) {
    MethodSpec spec;
    try {
      spec.id = method_from_string(token);
    } catch (const std::exception&) {
      throw ConfigError("unknown method '" + token + "'");
    }
    if (!method_valid_for(spec.id, s.direction))
      throw ConfigError("method '" + token + "' is not valid for direction " +
                        to_string(s.direction));
    spec.scaling = scaling;
    spec.integer_bits = integer_bits;
    spec.use_delta_f = use_delta_f;
    spec.thp_shaping_loss_db = thp_loss;
    s.methods.push_back(spec);
  }
  if (s.methods.empty()) throw ConfigError("methods list is empty");
  if (s.seeds.empty()) throw ConfigError("seeds list is empty");
  return s;
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

struct PointResult {
  std::string rate_rows;
  std::string tone_rows;
  std::vector<std::string> warnings;
};

BinderTopology point_topology(const Scenario& s, double length) {
  if (s.topology == Scenario::Topology::spread)
    return spread_binder(s.length_min_m, s.length_max_m, s.length_step_m, s.cable);
  return equal_binder(s.lines, length, s.cable);
}

// rates.csv length column: the user's own line length; aggregate rows
// (user = -1) carry the common length, or 0 for spread topologies.
double aggregate_length(const Scenario& s, double point_length) {
  return s.topology == Scenario::Topology::spread ? 0.0 : point_length;
}

void append_rate_rows(std::string& out, const RateReport& report,
                      const ChannelTensor& channel, std::uint64_t seed,
                      double agg_length) {
  for (Eigen::Index u = 0; u < report.user_rate_bps.size(); ++u) {
    bool aggregate = report.method == "mac_sum";
    double len = aggregate ? agg_length
                           : channel.length_m[static_cast<std::size_t>(u)];
    int user = aggregate ? -1 : static_cast<int>(u);
    out += format("%.2f", len);
    out += ',' + report.method;
    out += ',' + std::to_string(seed);
    out += ',' + std::to_string(user);
    out += ',' + format("%.6f", report.user_rate_bps(u) / 1e6);
    out += '\n';
  }
}

void append_tone_rows(std::string& out, const RateReport& report,
                      const ChannelTensor& channel, std::uint64_t seed) {
  for (std::size_t t = 0; t < channel.tones.size(); ++t) {
    double beta_db = lin_to_db(diag_dominance(channel.h[t]).beta);
    for (int u = 0; u < report.users; ++u) {
      double snr = report.snr(static_cast<Eigen::Index>(t), u);
      out += std::to_string(channel.tones[t]);
      out += ',' + format("%.6f", channel.freq_hz[t] / 1e6);
      out += ',' + std::to_string(seed);
      out += ',' + format("%.4f", beta_db);
      out += ',' + report.method;
      out += ',' + std::to_string(report.method == "mac_sum" ? -1 : u);
      out += ',' + format("%.4f", snr > 0 ? lin_to_db(snr) : -999.0);
      out += ',' + format("%.6f", report.bits(static_cast<Eigen::Index>(t), u));
      out += '\n';
    }
  }
}

void write_alpha_sweep(const Scenario& s, const SystemProfile& profile,
                       const std::filesystem::path& dir) {
  std::ofstream out(dir / "alpha.csv", std::ios::binary);
  out << "alpha,method,user,snr_db,bits\n";
  const double sigma2 = 1.0;
  const double px = db_to_lin(s.snr_db);
  const int n = s.lines;
  for (double a = s.alpha_min; a <= s.alpha_max + 1e-12; a += s.alpha_step) {
    MatrixC h = MatrixC::Constant(n, n, Complex(a, 0));
    h.diagonal().setConstant(Complex(1, 0));
    for (const MethodSpec& spec : s.methods) {
      auto emit = [&](const std::string& name, int user, double snr,
                      double bits) {
        out << format("%.4f", a) << ',' << name << ',' << user << ','
            << format("%.4f", snr > 0 ? lin_to_db(snr) : -999.0) << ','
            << format("%.6f", bits) << '\n';
      };
      if (spec.id == MethodId::mac_sum) {
        double c = mac_sum_capacity(h, VectorR::Constant(n, px), sigma2);
        emit("mac_sum", -1, std::pow(2.0, c) - 1.0, c);
      } else if (spec.id == MethodId::zf_bounds) {
        double beta = diag_dominance(h).beta;
        for (int u = 0; u < n; ++u) {
          auto [lo, hi] =
              zf_rate_bounds(h(u, u), beta, px, sigma2, profile.snr_gap_db);
          emit("zf_lower", u, 0.0, std::min(lo, double(profile.bit_cap)));
          emit("zf_upper", u, 0.0, std::min(hi, double(profile.bit_cap)));
        }
      } else {
        VectorR snr = method_tone_snr(h, spec, s.direction, px, sigma2);
        for (int u = 0; u < n; ++u)
          emit(to_string(spec.id), u, snr(u),
               bits_per_tone(snr(u), profile.snr_gap_db, profile.bit_cap));
      }
    }
  }
}

void write_learning_curve(const Scenario& s, const SystemProfile& profile,
                          const std::filesystem::path& dir, double first_length) {
  BinderTopology topo = point_topology(s, first_length);
  std::vector<int> tones = active_tones(profile);
  int tone = s.adapt_tone >= 0 ? s.adapt_tone : tones[tones.size() / 2];
  if (!tone_active(profile, tone))
    throw ConfigError("adapt_tone " + std::to_string(tone) + " is not active");
  MatrixC h = channel_matrix(topo, tone_frequency(profile, tone), tone,
                             s.seeds.front());
  if (s.direction == Direction::downstream) h.transposeInPlace();

  AdaptationSchedule schedule;
  schedule.mode = s.adapt_mode;
  schedule.mu_hat = s.adapt_mu;
  schedule.iterations = s.adapt_iterations;
  schedule.seed = s.seeds.front();
  AdaptationResult result = run_adaptation(
      h, tone_tx_power_mw(profile, tone), noise_power_mw(profile), schedule);

  std::ofstream out(dir / "learning.csv", std::ios::binary);
  out << "iteration,mse_db\n";
  for (std::size_t t = 0; t < result.state.mse_curve.size(); ++t)
    out << t << ',' << format("%.6f", lin_to_db(result.state.mse_curve[t]))
        << '\n';
}

}  // namespace

void run_scenario(const Scenario& s, const RunOptions& options) {
  const SystemProfile profile = make_profile(s.profile);
  std::ostream& log = options.log ? *options.log : std::cerr;
  std::filesystem::path dir(options.out_dir.empty() ? s.out_dir : options.out_dir);
  std::filesystem::create_directories(dir);

  if (s.sweep == Scenario::Sweep::alpha) {
    write_alpha_sweep(s, profile, dir);
    return;
  }

  std::vector<double> point_lengths;
  if (s.sweep == Scenario::Sweep::length) {
    for (double l = s.length_min_m; l <= s.length_max_m + 1e-9;
         l += s.length_step_m)
      point_lengths.push_back(l);
  } else {
    point_lengths.push_back(s.topology == Scenario::Topology::spread
                                ? s.length_max_m
                                : s.length_m);
  }

  const bool per_tone = s.sweep == Scenario::Sweep::frequency;
  const std::size_t items = point_lengths.size() * s.seeds.size();
  std::vector<PointResult> results(items);

  auto compute_item = [&](std::size_t idx) {
    double length = point_lengths[idx / s.seeds.size()];
    std::uint64_t seed = s.seeds[idx % s.seeds.size()];
    BinderTopology topo = point_topology(s, length);
    ChannelTensor channel =
        generate_channel(topo, profile, seed, s.direction, s.tone_step);
    PointResult& r = results[idx];
    for (const MethodSpec& spec : s.methods) {
      for (const RateReport& report : method_rate(channel, profile, spec)) {
        append_rate_rows(r.rate_rows, report, channel, seed,
                         aggregate_length(s, length));
        if (per_tone) append_tone_rows(r.tone_rows, report, channel, seed);
        for (const std::string& w : report.warnings)
          r.warnings.push_back("length " + format("%.0f", length) + " seed " +
                               std::to_string(seed) + ": " + w);
      }
    }
  };

  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || items <= 1) {
    for (std::size_t i = 0; i < items; ++i) compute_item(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::size_t workers = std::min(static_cast<std::size_t>(jobs), items);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < items;
             i = next.fetch_add(1))
          compute_item(i);
      });
    for (std::thread& t : pool) t.join();
  }

  std::ofstream rates(dir / "rates.csv", std::ios::binary);
  rates << "length_m,method,seed,user,rate_mbps\n";
  for (const PointResult& r : results) rates << r.rate_rows;

  if (per_tone) {
    std::ofstream tones(dir / "tones.csv", std::ios::binary);
    tones << "tone,freq_mhz,seed,beta_db,method,user,snr_db,bits\n";
    for (const PointResult& r : results) tones << r.tone_rows;
  }

  for (const PointResult& r : results)
    for (const std::string& w : r.warnings) log << "warning: " << w << '\n';

  if (s.adapt_enabled)
    write_learning_curve(s, profile, dir, point_lengths.front());
}

}  // namespace gfastsim
