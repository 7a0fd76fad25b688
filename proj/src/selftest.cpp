#include "gfastsim/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfastsim/canceler.hpp"
#include "gfastsim/precoder.hpp"
#include "gfastsim/qam.hpp"
#include "gfastsim/rate.hpp"
#include "gfastsim/rng.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim::selftest {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(std::ostream& out, const char* name, bool ok,
            const std::string& detail) {
  out << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) out << ": " << detail;
  out << '\n';
  return ok;
}

double rel_err(double got, double want) {
  double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// n-user channel with unit-modulus diagonal and equal off-diagonal coupling.
MatrixC symmetric_channel(int n, double alpha, double phase_rad = 0.37) {
  MatrixC h = MatrixC::Constant(n, n, Complex(alpha, 0));
  h.diagonal().setConstant(Complex(1, 0));
  return std::polar(1.0, phase_rad) * h;
}

Complex randn_c(Rng& rng) { return Complex(rng.normal(), rng.normal()) / std::sqrt(2.0); }

MatrixC gaussian_channel(int n, Rng& rng) {
  MatrixC h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = randn_c(rng);
  return h;
}

// Unit-modulus random-phase diagonal, off-diagonal scaled to hit beta exactly.
MatrixC dominance_channel(int n, double beta, Rng& rng) {
  MatrixC h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = randn_c(rng);
  for (int i = 0; i < n; ++i)
    h(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  MatrixC off = h;
  off.diagonal().setZero();
  double raw = diag_dominance(h).beta;
  if (raw > 0) off *= beta / raw;
  MatrixC out = off;
  out.diagonal() = h.diagonal();
  return out;
}

constexpr double kGapDb = 10.75;
const double kGapLin = std::pow(10.0, kGapDb / 10.0);

}  // namespace

bool box_a_suite(std::ostream& out) {
  auto t0 = Clock::now();
  const double alphas[] = {0.0, 0.1, 0.3, 0.5, 0.7};
  const double snrs[] = {10.0, 100.0};
  double worst = 0;
  for (double a : alphas) {
    MatrixC h = symmetric_channel(2, a);
    for (double s : snrs) {
      double zf_want = s * std::pow(1 - a * a, 2) / (1 + a * a);
      double mmse_want = s * ((1 + a * a) + s * std::pow(1 - a * a, 2)) /
                         (1 + s * (1 + a * a));
      VectorR zf = zf_snr(h, s, 1.0);
      VectorR mmse = mmse_snr(h, s, 1.0);
      for (int i = 0; i < 2; ++i) {
        worst = std::max(worst, rel_err(zf(i), zf_want));
        worst = std::max(worst, rel_err(mmse(i), mmse_want));
        worst = std::max(worst, rel_err(swp_snr(h, i, s, 1.0), s));
        worst = std::max(worst,
                         rel_err(mfb_snr(h, i, s, 1.0), s * (1 + a * a)));
        worst = std::max(worst, rel_err(mfb_snr(h, i, s, 1.0,
                                               Direction::downstream),
                                        s * (1 + a * a)));
      }
    }
    // High-SNR limit: unbiased MMSE collapses onto ZF.
    double big = 1e10;
    double zf_want = big * std::pow(1 - a * a, 2) / (1 + a * a);
    VectorR mmse = mmse_snr(h, big, 1.0);
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, rel_err(mmse(i), zf_want));
  }
  double dt = elapsed_s(t0);
  bool ok = worst <= 1e-9 && dt < 1.0;
  return report(out, "two-user closed forms (zf/mmse/swp/mfb)", ok,
                fmt("max rel err %.3g, %.3f s", worst, dt));
}

bool box_d_suite(std::ostream& out) {
  const double alphas[] = {0.0, 0.05, 0.1, 0.2};
  const double snrs[] = {100.0, 1e4};
  double worst = 0;
  for (double a : alphas) {
    MatrixC h = symmetric_channel(3, a);
    for (double s : snrs) {
      double want = s * std::pow(1 - 2 * a * a, 2) /
                    (2 * std::pow(a, 4) * s + 2 * a * a + 1);
      VectorR got = azf_snr(h, s, 1.0);
      for (int i = 0; i < 3; ++i) worst = std::max(worst, rel_err(got(i), want));
    }
  }
  // Two users: the single Jacobi sweep is exact, azf == zf.
  {
    MatrixC h2 = symmetric_channel(2, 0.3);
    VectorR azf = azf_snr(h2, 100.0, 1.0);
    VectorR zf = zf_snr(h2, 100.0, 1.0);
    for (int i = 0; i < 2; ++i) worst = std::max(worst, rel_err(azf(i), zf(i)));
  }
  // Residual interference must cost a visible rate gap at 40 dB, alpha 0.1.
  MatrixC h = symmetric_channel(3, 0.1);
  double s = 1e4;
  double gap = bits_per_tone(zf_snr(h, s, 1.0)(0), kGapDb,
                             std::numeric_limits<double>::infinity()) -
               bits_per_tone(azf_snr(h, s, 1.0)(0), kGapDb,
                             std::numeric_limits<double>::infinity());
  bool ok = worst <= 1e-9 && gap > 0.5;
  return report(out, "three-user azf closed form", ok,
                fmt("max rel err %.3g, zf-azf gap %.2f bit", worst, gap));
}

bool thp_roundtrip_suite(std::ostream& out) {
  auto t0 = Clock::now();
  const int sizes[] = {2, 4, 8};
  const Qam qam(4);
  const double a = qam.half_edge();
  int redraws = 0, errors = 0;
  double worst_sym = 0, worst_box = 0;
  for (int idx = 0; idx < 1000; ++idx) {
    int n = sizes[idx % 3];
    Rng rng(stream_key(987, kTestTag, static_cast<std::uint64_t>(idx)));
    MatrixC h = gaussian_channel(n, rng);
    while (condition_estimate(h) > 1e6) {
      h = gaussian_channel(n, rng);
      ++redraws;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      order[static_cast<std::size_t>(i)] = (idx % 2) ? (i + 1) % n : i;
    VectorC x(n);
    for (int i = 0; i < n; ++i) x(i) = qam.random_symbol(rng);
    ThpCoder coder(h, order);
    ThpCoder::Encoded enc = coder.encode(x, a);
    for (int m = 0; m < n; ++m) {
      double over = std::max(std::abs(enc.folded(m).real()),
                             std::abs(enc.folded(m).imag())) - a;
      worst_box = std::max(worst_box, over);
    }
    VectorC y = h * enc.tx;
    for (int m = 0; m < n; ++m) {
      int u = coder.user_at(m);
      Complex xh = thp_receive(y(u), coder.stage_gain(m), a);
      double err = std::abs(xh - x(u));
      worst_sym = std::max(worst_sym, err);
      if (err > 1e-8) ++errors;
    }
  }
  double dt = elapsed_s(t0);
  bool ok = errors == 0 && worst_box <= 1e-12 && dt < 10.0;
  return report(out, "thp noiseless round trip", ok,
                fmt("1000 channels, worst symbol err %.3g, %.3f s",
                    worst_sym, dt) +
                    (redraws ? ", " + std::to_string(redraws) + " redraws"
                             : std::string()));
}

bool box_c_suite(std::ostream& out) {
  const double alphas[] = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
  double worst_gain = 0, worst_snr = 0;
  for (double a : alphas) {
    MatrixC h = symmetric_channel(2, a);
    LinearPrecoder p = zf_precoder(h);
    double g_want = (1 - a * a) / std::sqrt(1 + a * a);
    double s = 100.0;
    double snr_want = s * std::pow(1 - a * a, 2) / (1 + a * a);
    VectorR snr = zf_precoder_snr(h, PrecoderScaling::row_norm, s, 1.0);
    VectorR snr_g = zf_precoder_snr(h, PrecoderScaling::global, s, 1.0);
    for (int i = 0; i < 2; ++i) {
      worst_gain = std::max(worst_gain, std::abs(p.gain(i) - g_want));
      worst_snr = std::max(worst_snr, rel_err(snr(i), snr_want));
      worst_snr = std::max(worst_snr, rel_err(snr_g(i), snr_want));
    }
  }
  bool gain_ok = worst_gain <= 1e-12 && worst_snr <= 1e-9;
  // Mask feasibility: every precoder row norm <= 1 on random channels.
  double worst_row = 0;
  int low_max = 0;
  for (int idx = 0; idx < 1000; ++idx) {
    int n = 2 << (idx % 3);  // 2, 4, 8
    Rng rng(stream_key(321, kTestTag, static_cast<std::uint64_t>(idx)));
    MatrixC h = gaussian_channel(n, rng);
    while (condition_estimate(h) > 1e8 ||
           h.diagonal().cwiseAbs().minCoeff() < 1e-3) {
      h = gaussian_channel(n, rng);
    }
    LinearPrecoder p = zf_precoder(h);
    double max_row = std::sqrt(p.f.rowwise().squaredNorm().maxCoeff());
    worst_row = std::max(worst_row, max_row);
    if (max_row < 1.0 - 1e-9) ++low_max;  // scaling must bind some row
  }
  bool ok = gain_ok && worst_row <= 1.0 + 1e-12 && low_max == 0;
  return report(out, "linear precoder gain and row norms", ok,
                fmt("max gain err %.3g, max row norm %.12f", worst_gain,
                    worst_row));
}

bool bound_ordering_suite(std::ostream& out) {
  const double px = 1e6, sigma2 = 1.0;  // 60 dB
  const double inf = std::numeric_limits<double>::infinity();
  int violations = 0, redraws = 0;
  double beta_lo = 10, beta_hi = 0;
  for (int idx = 0; idx < 1000; ++idx) {
    Rng rng(stream_key(55, kTestTag, static_cast<std::uint64_t>(idx)));
    int n = 2 + idx % 7;
    double beta = 0.0015 + 1.4985 * rng.uniform();
    MatrixC h = dominance_channel(n, beta, rng);
    int guard = 0;
    while (condition_estimate(h) > 300 && ++guard < 100) {
      h = dominance_channel(n, beta, rng);
      ++redraws;
    }
    beta_lo = std::min(beta_lo, beta);
    beta_hi = std::max(beta_hi, beta);

    VectorR none = no_cancellation_snr(h, px, sigma2);
    VectorR zf = zf_snr(h, px, sigma2);
    VectorR mmse = mmse_snr(h, px, sigma2);
    VectorR gdfe = gdfe_snr(h, {}, px, sigma2);
    double gdfe_sum = 0;
    for (int i = 0; i < n; ++i) {
      double mfb = mfb_snr(h, i, px, sigma2);
      double b_none = bits_per_tone(none(i), kGapDb, inf);
      double b_zf = bits_per_tone(zf(i), kGapDb, inf);
      double b_mmse = bits_per_tone(mmse(i), kGapDb, inf);
      double b_mfb = bits_per_tone(mfb, kGapDb, inf);
      if (b_none > b_zf + 1e-9) ++violations;
      if (b_zf > b_mmse + 1e-9) ++violations;
      if (b_mmse > b_mfb + 1e-9) ++violations;
      gdfe_sum += std::log2(1.0 + gdfe(i));
      if (beta < 0.41) {
        auto [lo, hi] = zf_rate_bounds(h(i, i), beta, px, sigma2, kGapDb);
        if (b_zf < lo - 1e-9 || b_zf > hi + 1e-9) ++violations;
      }
    }
    // Last-detected user (position 0 under natural order) reaches its MFB.
    if (rel_err(gdfe(0), mfb_snr(h, 0, px, sigma2)) > 1e-9) ++violations;
    double mac = mac_sum_capacity(h, VectorR::Constant(n, px), sigma2);
    if (gdfe_sum > mac + 1e-9) ++violations;
  }
  bool ok = violations == 0;
  return report(out, "snr orderings and zf bracket", ok,
                fmt("1000 channels, beta %.4f..%.4f, ", beta_lo, beta_hi) +
                    std::to_string(violations) + " violations" +
                    (redraws ? ", " + std::to_string(redraws) + " redraws"
                             : std::string()));
}

bool run_all(std::ostream& out) {
  bool ok = true;
  ok &= box_a_suite(out);
  ok &= box_d_suite(out);
  ok &= thp_roundtrip_suite(out);
  ok &= box_c_suite(out);
  ok &= bound_ordering_suite(out);
  out << (ok ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
  return ok;
}

}  // namespace gfastsim::selftest
