#include "gfastsim/profile.hpp"

#include <algorithm>
#include <stdexcept>

#include "gfastsim/types.hpp"

namespace gfastsim {

namespace {

SystemProfile gfast_base() {
  SystemProfile p;
  p.tone_width_hz = 51750.0;
  p.start_freq_hz = 2.2e6;
  p.symbol_rate_hz = 48000.0;
  p.cp_len = 320;
  p.noise_psd_dbm_hz = -140.0;
  p.snr_gap_db = 10.75;
  p.bit_cap = 12;
  p.total_power_dbm = 4.0;
  return p;
}

}  // namespace

SystemProfile make_profile(std::string_view name) {
  if (name == "gfast106") {
    SystemProfile p = gfast_base();
    p.name = "gfast106";
    p.tone_count = 2048;
    p.stop_freq_hz = 106e6;
    return p;
  }
  if (name == "gfast212") {
    SystemProfile p = gfast_base();
    p.name = "gfast212";
    p.tone_count = 4096;
    p.stop_freq_hz = 212e6;
    return p;
  }
  if (name == "vdsl17") {
    SystemProfile p;
    p.name = "vdsl17";
    p.tone_count = 4096;
    p.tone_width_hz = 4312.5;
    p.start_freq_hz = 138e3;
    p.stop_freq_hz = 17.664e6;
    p.symbol_rate_hz = 4000.0;
    p.cp_len = 640;
    p.noise_psd_dbm_hz = -140.0;
    p.snr_gap_db = 10.75;
    p.bit_cap = 15;
    p.total_power_dbm = 14.5;
    return p;
  }
  throw std::invalid_argument("unknown profile: " + std::string(name));
}

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names = {"gfast106", "gfast212",
                                                 "vdsl17"};
  return names;
}

double psd_mask_dbm_hz(const SystemProfile& p, double f_hz) {
  if (f_hz < p.start_freq_hz || f_hz > p.stop_freq_hz)
    throw std::invalid_argument("psd_mask: frequency out of band");
  if (f_hz <= 30e6) return -65.0;
  if (f_hz <= 106e6) return -76.0;
  return -79.0;
}

double tone_frequency(const SystemProfile& p, int k) {
  if (k < 0 || k >= p.tone_count)
    throw std::invalid_argument("tone_frequency: tone index out of range");
  return k * p.tone_width_hz;
}

bool tone_active(const SystemProfile& p, int k) {
  double f = tone_frequency(p, k);
  return f >= p.start_freq_hz && f <= p.stop_freq_hz;
}

std::vector<int> active_tones(const SystemProfile& p, int tone_step) {
  if (tone_step < 1)
    throw std::invalid_argument("active_tones: tone_step must be >= 1");
  std::vector<int> tones;
  for (int k = 0; k < p.tone_count; ++k)
    if (tone_active(p, k)) tones.push_back(k);
  if (tone_step > 1) {
    std::vector<int> strided;
    for (std::size_t i = 0; i < tones.size(); i += tone_step)
      strided.push_back(tones[i]);
    return strided;
  }
  return tones;
}

double tx_power_scale(const SystemProfile& p) {
  double sum_mw = 0.0;
  for (int k = 0; k < p.tone_count; ++k) {
    if (!tone_active(p, k)) continue;
    double mask = psd_mask_dbm_hz(p, tone_frequency(p, k));
    sum_mw += dbm_to_mw(mask) * p.tone_width_hz;
  }
  double cap_mw = dbm_to_mw(p.total_power_dbm);
  if (sum_mw <= cap_mw || sum_mw == 0.0) return 1.0;
  return cap_mw / sum_mw;
}

double tone_tx_power_mw(const SystemProfile& p, int k) {
  if (!tone_active(p, k))
    throw std::invalid_argument("tone_tx_power: tone is not active");
  double mask = psd_mask_dbm_hz(p, tone_frequency(p, k));
  return dbm_to_mw(mask) * p.tone_width_hz * tx_power_scale(p);
}

std::vector<double> tone_power_table_mw(const SystemProfile& p) {
  std::vector<double> table(p.tone_count, 0.0);
  double scale = tx_power_scale(p);
  for (int k = 0; k < p.tone_count; ++k) {
    if (!tone_active(p, k)) continue;
    double mask = psd_mask_dbm_hz(p, tone_frequency(p, k));
    table[k] = dbm_to_mw(mask) * p.tone_width_hz * scale;
  }
  return table;
}

double noise_power_mw(const SystemProfile& p) {
  return dbm_to_mw(p.noise_psd_dbm_hz) * p.tone_width_hz;
}

}  // namespace gfastsim
