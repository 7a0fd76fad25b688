#include "gfastsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "gfastsim/rng.hpp"

namespace gfastsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPropagationSpeed = 2e8;  // m/s

// Mean of 10^(X/10) for X ~ N(0, sigma_db^2); divides the log-normal draw so
// the sampled coupling keeps the model mean exactly.
double lognormal_mean_correction(double sigma_db) {
  double eta = sigma_db * std::log(10.0) / 10.0;
  return std::exp(0.5 * eta * eta);
}

}  // namespace

CableModel make_cable(std::string_view name) {
  CableModel c;
  if (name == "cat5" || name == "generic") {
    c.name = std::string(name);
    c.il_a0 = 1.0;
    c.il_a1 = 3.0;
    c.il_a2 = 0.04;
    c.chi_fext = chi_from_coupling_db(-38.0);
    return c;
  }
  if (name == "cad55") {
    c.name = "cad55";
    c.il_a0 = 1.0;
    c.il_a1 = 3.8;
    c.il_a2 = 0.06;
    c.chi_fext = chi_from_coupling_db(-36.0);
    return c;
  }
  throw std::invalid_argument("unknown cable: " + std::string(name));
}

double chi_from_coupling_db(double coupling_db, double f_ref_hz,
                            double d_ref_m) {
  return db_to_lin(coupling_db) / (f_ref_hz * f_ref_hz * d_ref_m);
}

void validate_cable(const CableModel& c) {
  if (c.il_a0 < 0 || c.il_a1 < 0 || c.il_a2 < 0)
    throw std::invalid_argument("cable: insertion-loss coefficients must be >= 0");
  if (!(c.chi_fext > 0))
    throw std::invalid_argument("cable: chi_fext must be > 0");
  if (c.sigma_fext_db < 0)
    throw std::invalid_argument("cable: sigma_fext_db must be >= 0");
  if (!(c.fext_breakpoint_hz > 0))
    throw std::invalid_argument("cable: fext_breakpoint must be > 0");
  if (c.fext_slope_hi < 1.0)
    throw std::invalid_argument("cable: fext_slope_hi must be >= 1");
}

BinderTopology equal_binder(int lines, double length_m, CableModel cable) {
  BinderTopology t;
  t.lines = lines;
  t.length_m.assign(static_cast<std::size_t>(lines > 0 ? lines : 0), length_m);
  t.cable = std::move(cable);
  validate_topology(t);
  return t;
}

BinderTopology spread_binder(double min_m, double max_m, double step_m,
                             CableModel cable) {
  if (!(step_m > 0) || max_m < min_m)
    throw std::invalid_argument("spread_binder: invalid length range");
  BinderTopology t;
  for (double l = min_m; l <= max_m + 1e-9; l += step_m) t.length_m.push_back(l);
  t.lines = static_cast<int>(t.length_m.size());
  t.cable = std::move(cable);
  validate_topology(t);
  return t;
}

void validate_topology(const BinderTopology& t) {
  if (t.lines < 1) throw std::invalid_argument("topology: need at least one line");
  if (static_cast<int>(t.length_m.size()) != t.lines)
    throw std::invalid_argument("topology: length list does not match line count");
  for (double l : t.length_m)
    if (!(l > 0)) throw std::invalid_argument("topology: line lengths must be > 0");
  validate_cable(t.cable);
}

double coupling_length_m(const BinderTopology& t, int i, int j) {
  return std::min(t.length_m.at(i), t.length_m.at(j));
}

Direction direction_from_string(std::string_view s) {
  if (s == "up" || s == "upstream") return Direction::upstream;
  if (s == "down" || s == "downstream") return Direction::downstream;
  throw std::invalid_argument("unknown direction: " + std::string(s));
}

const char* to_string(Direction d) {
  return d == Direction::upstream ? "up" : "down";
}

double insertion_loss_db(const CableModel& c, double f_hz, double l_m) {
  if (!(f_hz > 0) || l_m < 0)
    throw std::invalid_argument("insertion_loss: need f > 0 and l >= 0");
  double f_mhz = f_hz / 1e6;
  return l_m / 100.0 * (c.il_a0 + c.il_a1 * std::sqrt(f_mhz) + c.il_a2 * f_mhz);
}

Complex direct_gain(const CableModel& c, double f_hz, double l_m) {
  double mag = std::pow(10.0, -insertion_loss_db(c, f_hz, l_m) / 20.0);
  double phase = -2.0 * kPi * f_hz * l_m / kPropagationSpeed;
  return std::polar(mag, phase);
}

double fext_coupling_std(const CableModel& c, double f_hz, double d_m,
                         double direct_power) {
  if (!(f_hz > 0) || d_m < 0 || direct_power < 0)
    throw std::invalid_argument("fext_coupling_std: invalid argument");
  double f_eff = f_hz;
  if (f_hz > c.fext_breakpoint_hz)
    f_eff = c.fext_breakpoint_hz *
            std::pow(f_hz / c.fext_breakpoint_hz, c.fext_slope_hi);
  return c.chi_fext * f_eff * f_eff * d_m * direct_power;
}

MatrixC channel_matrix(const BinderTopology& t, double f_hz, int tone_index,
                       std::uint64_t seed) {
  const int n = t.lines;
  const CableModel& cable = t.cable;
  MatrixC h(n, n);
  for (int i = 0; i < n; ++i)
    h(i, i) = direct_gain(cable, f_hz, t.length_m[i]);
  if (n == 1) return h;

  const double correction = lognormal_mean_correction(cable.sigma_fext_db);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // One dB offset per ordered pair, shared by every tone of this seed.
      Rng pair_rng(stream_key(seed, kPairOffsetTag, i, j));
      double offset_db = cable.sigma_fext_db * pair_rng.normal();
      double direct_power = std::norm(h(j, j));
      double mean_power =
          fext_coupling_std(cable, f_hz, coupling_length_m(t, i, j), direct_power);
      double power = mean_power * db_to_lin(offset_db) / correction;
      Rng phase_rng(stream_key(seed, kTonePhaseTag, tone_index, i, j));
      double phase = 2.0 * kPi * phase_rng.uniform();
      h(i, j) = std::polar(std::sqrt(power), phase);
    }
  }
  return h;
}

ChannelTensor generate_channel(const BinderTopology& t,
                               const SystemProfile& profile,
                               std::uint64_t seed, Direction direction,
                               int tone_step) {
  validate_topology(t);
  ChannelTensor tensor;
  tensor.direction = direction;
  tensor.seed = seed;
  tensor.lines = t.lines;
  tensor.tone_step = tone_step;
  tensor.length_m = t.length_m;
  tensor.tones = active_tones(profile, tone_step);
  tensor.freq_hz.reserve(tensor.tones.size());
  tensor.h.reserve(tensor.tones.size());
  for (int k : tensor.tones) {
    double f = tone_frequency(profile, k);
    tensor.freq_hz.push_back(f);
    MatrixC h = channel_matrix(t, f, k, seed);
    if (direction == Direction::downstream) h.transposeInPlace();
    tensor.h.push_back(std::move(h));
  }
  return tensor;
}

}  // namespace gfastsim
