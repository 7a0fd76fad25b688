#pragma once
// DMT system profiles: tone grid, PSD mask, power budget and loading limits.

#include <string>
#include <string_view>
#include <vector>

namespace gfastsim {

struct SystemProfile {
  std::string name;
  int tone_count = 0;            // tone indices 0 .. tone_count-1
  double tone_width_hz = 0.0;    // subcarrier spacing
  double start_freq_hz = 0.0;    // tones outside [start, stop] are inactive
  double stop_freq_hz = 0.0;
  double symbol_rate_hz = 0.0;   // DMT symbols per second, cyclic extension included
  int cp_len = 0;                // informational
  double noise_psd_dbm_hz = 0.0;
  double snr_gap_db = 0.0;
  int bit_cap = 0;
  double total_power_dbm = 0.0;
};

// Known profiles: gfast106, gfast212, vdsl17.
SystemProfile make_profile(std::string_view name);
const std::vector<std::string>& profile_names();

// Flat dBm/Hz ceiling at f; rejects f outside [start_freq, stop_freq].
double psd_mask_dbm_hz(const SystemProfile& p, double f_hz);

double tone_frequency(const SystemProfile& p, int k);
bool tone_active(const SystemProfile& p, int k);
std::vector<int> active_tones(const SystemProfile& p, int tone_step = 1);

// Uniform scale-down factor (<= 1) applied to mask-limited tone powers so the
// active-band sum meets the total power cap.
double tx_power_scale(const SystemProfile& p);

// Per-tone transmit power in mW for an active tone k, mask-limited and scaled.
double tone_tx_power_mw(const SystemProfile& p, int k);

// Full table of per-tone powers (inactive tones hold 0); computes the budget
// scale once instead of per tone.
std::vector<double> tone_power_table_mw(const SystemProfile& p);

// Per-tone receiver noise power in mW.
double noise_power_mw(const SystemProfile& p);

}  // namespace gfastsim
