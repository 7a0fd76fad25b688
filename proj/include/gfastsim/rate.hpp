#pragma once
/**
 * Bit loading and per-user rates: converts post-processing SNRs into gap- and
 * cap-limited bits per tone, aggregates user rates, and computes the bound
 * family (SWP, MFB, diagonal-dominance ZF bounds, MAC sum capacity).
 */

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gfastsim/channel.hpp"
#include "gfastsim/precoder.hpp"
#include "gfastsim/profile.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim {

// min(log2(1 + snr/Gamma), bit_cap).
double bits_per_tone(double snr, double gap_db, double bit_cap);

// symbol_rate * sum of per-tone bits.
double user_rate(const VectorR& bits, double symbol_rate);

// Diagonal-dominance bracket for the ZF rate: lower uses
// f(beta) = max{0, 1 - 2*beta - beta^2} (vacuous for beta > sqrt(2)-1),
// upper uses the (1 + beta) noise-enhancement allowance. Uncapped bits.
std::pair<double, double> zf_rate_bounds(Complex h_ii, double beta, double px,
                                         double sigma2, double gap_db);

// log2 det(I + H S H^H / sigma^2) with S = diag(power).
double mac_sum_capacity(const MatrixC& h, const VectorR& power, double sigma2);

enum class MethodId {
  none,
  zf,
  mmse,
  azf,
  zf_gdfe,
  zf_linear,
  thp,
  swp,
  mfb,
  zf_bounds,
  mac_sum,
};

MethodId method_from_string(std::string_view s);
const char* to_string(MethodId m);
bool method_is_bound(MethodId m);
bool method_valid_for(MethodId m, Direction d);

struct MethodSpec {
  MethodId id = MethodId::zf;
  PrecoderScaling scaling = PrecoderScaling::row_norm;
  std::vector<int> ordering;       // zf_gdfe / thp; empty = natural order
  bool integer_bits = false;       // floor per-tone bits
  bool use_delta_f = false;        // rate basis delta_f instead of symbol rate
  double thp_shaping_loss_db = 0;  // optional fixed modulo-loss penalty
};

struct RateReport {
  std::string method;
  std::string profile;
  int users = 0;          // 1 for mac_sum (binder aggregate)
  std::vector<int> tones; // stored tone indices
  int tone_step = 1;
  MatrixR snr;            // stored tones x users, linear
  MatrixR bits;           // stored tones x users, gap/cap applied
  VectorR user_rate_bps;
  std::vector<std::string> warnings;  // tones skipped as singular
};

// Per-user linear SNR of one tone matrix under a non-bound method (bounds
// other than swp/mfb are handled by method_rate).
VectorR method_tone_snr(const MatrixC& h, const MethodSpec& spec,
                        Direction direction, double px, double sigma2);

// One report per method; zf_bounds expands to two reports (zf_lower,
// zf_upper). Decimated tensors scale the aggregate by tone_step.
std::vector<RateReport> method_rate(const ChannelTensor& channel,
                                    const SystemProfile& profile,
                                    const MethodSpec& spec);

}  // namespace gfastsim
