#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gfastsim/profile.hpp"
#include "gfastsim/types.hpp"

using namespace gfastsim;

TEST_SUITE_BEGIN("profile");

TEST_CASE("profile constants") {
  SystemProfile g1 = make_profile("gfast106");
  CHECK(g1.tone_count == 2048);
  CHECK(g1.tone_width_hz == doctest::Approx(51750.0));
  CHECK(g1.stop_freq_hz == doctest::Approx(106e6));
  CHECK(g1.snr_gap_db == doctest::Approx(10.75));
  CHECK(g1.noise_psd_dbm_hz == doctest::Approx(-140.0));
  CHECK(g1.symbol_rate_hz == doctest::Approx(48000.0));
  CHECK(g1.bit_cap == 12);
  CHECK(g1.total_power_dbm == doctest::Approx(4.0));

  SystemProfile g2 = make_profile("gfast212");
  CHECK(g2.tone_count == 4096);
  CHECK(g2.stop_freq_hz == doctest::Approx(212e6));
  CHECK(g2.tone_width_hz == doctest::Approx(51750.0));

  SystemProfile v = make_profile("vdsl17");
  CHECK(v.tone_count == 4096);
  CHECK(v.tone_width_hz == doctest::Approx(4312.5));
  CHECK(v.symbol_rate_hz == doctest::Approx(4000.0));
  CHECK(v.bit_cap == 15);

  CHECK(profile_names().size() == 3);
  CHECK_THROWS_AS(make_profile("gfast999"), std::invalid_argument);
}

TEST_CASE("psd mask bands") {
  SystemProfile g1 = make_profile("gfast106");
  SystemProfile g2 = make_profile("gfast212");
  CHECK(psd_mask_dbm_hz(g1, 10e6) == doctest::Approx(-65.0));
  CHECK(psd_mask_dbm_hz(g1, 50e6) == doctest::Approx(-76.0));
  CHECK(psd_mask_dbm_hz(g2, 150e6) == doctest::Approx(-79.0));
  CHECK_THROWS_AS(psd_mask_dbm_hz(g1, 150e6), std::invalid_argument);
  CHECK_THROWS_AS(psd_mask_dbm_hz(g1, 1e6), std::invalid_argument);
}

TEST_CASE("tone grid") {
  SystemProfile g1 = make_profile("gfast106");
  CHECK(tone_frequency(g1, 0) == doctest::Approx(0.0));
  CHECK_FALSE(tone_active(g1, 0));
  CHECK(tone_frequency(g1, 43) == doctest::Approx(2.22525e6));
  CHECK(tone_active(g1, 43));
  CHECK_FALSE(tone_active(g1, 42));  // 2.1735 MHz, below band start
  CHECK(tone_frequency(g1, 2047) == doctest::Approx(105.93225e6));
  CHECK(tone_active(g1, 2047));
  CHECK_THROWS_AS(tone_frequency(g1, 2048), std::invalid_argument);
  CHECK_THROWS_AS(tone_frequency(g1, -1), std::invalid_argument);

  std::vector<int> act = active_tones(g1);
  CHECK(act.front() == 43);
  CHECK(act.back() == 2047);
  std::vector<int> dec = active_tones(g1, 8);
  CHECK(dec.size() == (act.size() + 7) / 8);
  CHECK(dec[1] - dec[0] == 8);
}

TEST_CASE("tone power and budget") {
  SystemProfile g1 = make_profile("gfast106");
  // Mask-limited power before budget scaling: 10^(-6.5) mW/Hz * 51.75 kHz.
  double mask_mw = dbm_to_mw(-65.0) * g1.tone_width_hz;
  CHECK(mask_mw == doctest::Approx(0.01636).epsilon(1e-3));

  double scale = tx_power_scale(g1);
  CHECK(scale > 0);
  CHECK(scale < 1);  // gfast106 is budget-limited
  CHECK(tone_tx_power_mw(g1, 193) ==
        doctest::Approx(mask_mw * scale).epsilon(1e-12));

  // Budget binds: active powers sum to exactly 4 dBm.
  std::vector<double> table = tone_power_table_mw(g1);
  double total = std::accumulate(table.begin(), table.end(), 0.0);
  CHECK(total == doctest::Approx(dbm_to_mw(4.0)).epsilon(1e-9));
  CHECK(table[0] == 0.0);  // inactive tone
  CHECK_THROWS_AS(tone_tx_power_mw(g1, 0), std::invalid_argument);

  // vdsl17 is mask-limited: no scaling, sum below the cap.
  SystemProfile v = make_profile("vdsl17");
  CHECK(tx_power_scale(v) == doctest::Approx(1.0));
  std::vector<double> vt = tone_power_table_mw(v);
  CHECK(std::accumulate(vt.begin(), vt.end(), 0.0) < dbm_to_mw(v.total_power_dbm));

  CHECK(noise_power_mw(g1) ==
        doctest::Approx(dbm_to_mw(-140.0) * 51750.0).epsilon(1e-12));
}

TEST_SUITE_END();
