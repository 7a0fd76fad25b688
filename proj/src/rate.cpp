#include "gfastsim/rate.hpp"

#include <cmath>
#include <stdexcept>

#include "gfastsim/canceler.hpp"

namespace gfastsim {

double bits_per_tone(double snr, double gap_db, double bit_cap) {
  if (snr < 0) throw std::invalid_argument("bits_per_tone: snr must be >= 0");
  double gamma = db_to_lin(gap_db);
  return std::min(std::log2(1.0 + snr / gamma), bit_cap);
}

double user_rate(const VectorR& bits, double symbol_rate) {
  return symbol_rate * bits.sum();
}

std::pair<double, double> zf_rate_bounds(Complex h_ii, double beta, double px,
                                         double sigma2, double gap_db) {
  if (beta < 0) throw std::invalid_argument("zf_rate_bounds: beta must be >= 0");
  double gamma = db_to_lin(gap_db);
  double swp = px * std::norm(h_ii) / sigma2;
  double f = std::max(0.0, 1.0 - 2.0 * beta - beta * beta);
  double lower = std::log2(1.0 + swp * f / gamma);
  double upper = std::log2(1.0 + swp * (1.0 + beta) / gamma);
  return {lower, upper};
}

double mac_sum_capacity(const MatrixC& h, const VectorR& power, double sigma2) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("mac_sum_capacity: square matrix required");
  if (power.size() != h.cols())
    throw std::invalid_argument("mac_sum_capacity: power size mismatch");
  if ((power.array() < 0).any())
    throw std::invalid_argument("mac_sum_capacity: powers must be >= 0");
  MatrixC a = h * power.asDiagonal() * h.adjoint() / sigma2;
  a.diagonal().array() += 1.0;
  Eigen::LLT<MatrixC> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mac_sum_capacity: factorization failed");
  double log_det = 0.0;
  MatrixC l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    log_det += 2.0 * std::log(l(i, i).real());
  return log_det / std::log(2.0);
}

MethodId method_from_string(std::string_view s) {
  if (s == "none") return MethodId::none;
  if (s == "zf") return MethodId::zf;
  if (s == "mmse") return MethodId::mmse;
  if (s == "azf") return MethodId::azf;
  if (s == "zf_gdfe") return MethodId::zf_gdfe;
  if (s == "zf_linear") return MethodId::zf_linear;
  if (s == "thp") return MethodId::thp;
  if (s == "swp") return MethodId::swp;
  if (s == "mfb") return MethodId::mfb;
  if (s == "zf_bounds") return MethodId::zf_bounds;
  if (s == "mac_sum") return MethodId::mac_sum;
  throw std::invalid_argument("unknown method: " + std::string(s));
}

const char* to_string(MethodId m) {
  switch (m) {
    case MethodId::none: return "none";
    case MethodId::zf: return "zf";
    case MethodId::mmse: return "mmse";
    case MethodId::azf: return "azf";
    case MethodId::zf_gdfe: return "zf_gdfe";
    case MethodId::zf_linear: return "zf_linear";
    case MethodId::thp: return "thp";
    case MethodId::swp: return "swp";
    case MethodId::mfb: return "mfb";
    case MethodId::zf_bounds: return "zf_bounds";
    case MethodId::mac_sum: return "mac_sum";
  }
  return "?";
}

bool method_is_bound(MethodId m) {
  return m == MethodId::swp || m == MethodId::mfb || m == MethodId::zf_bounds ||
         m == MethodId::mac_sum;
}

bool method_valid_for(MethodId m, Direction d) {
  switch (m) {
    case MethodId::zf:
    case MethodId::mmse:
    case MethodId::azf:
    case MethodId::zf_gdfe:
      return d == Direction::upstream;
    case MethodId::zf_linear:
    case MethodId::thp:
      return d == Direction::downstream;
    default:
      return true;  // none and the bounds apply in both directions
  }
}

// Per-user linear SNR for one tone; bounds handled by the caller.
VectorR method_tone_snr(const MatrixC& h, const MethodSpec& spec,
                        Direction dir, double px, double sigma2) {
  const Eigen::Index n = h.rows();
  switch (spec.id) {
    case MethodId::none:
      return no_cancellation_snr(h, px, sigma2);
    case MethodId::zf:
      return zf_snr(h, px, sigma2);
    case MethodId::mmse:
      return mmse_snr(h, px, sigma2);
    case MethodId::azf:
      return azf_snr(h, px, sigma2);
    case MethodId::zf_gdfe:
      return gdfe_snr(h, spec.ordering, px, sigma2);
    case MethodId::zf_linear:
      return zf_precoder_snr(h, spec.scaling, px, sigma2);
    case MethodId::thp: {
      VectorR s = thp_snr(h, spec.ordering, px, sigma2);
      if (spec.thp_shaping_loss_db != 0)
        s *= db_to_lin(-spec.thp_shaping_loss_db);
      return s;
    }
    case MethodId::swp: {
      VectorR s(n);
      for (Eigen::Index i = 0; i < n; ++i) s(i) = swp_snr(h, i, px, sigma2);
      return s;
    }
    case MethodId::mfb: {
      VectorR s(n);
      for (Eigen::Index i = 0; i < n; ++i)
        s(i) = mfb_snr(h, i, px, sigma2, dir);
      return s;
    }
    default:
      throw std::invalid_argument("method_tone_snr: bound method not handled here");
  }
}

namespace {

RateReport make_report(const ChannelTensor& channel,
                       const SystemProfile& profile, std::string method,
                       int users) {
  RateReport r;
  r.method = std::move(method);
  r.profile = profile.name;
  r.users = users;
  r.tones = channel.tones;
  r.tone_step = channel.tone_step;
  r.snr = MatrixR::Zero(static_cast<Eigen::Index>(channel.tones.size()), users);
  r.bits = MatrixR::Zero(static_cast<Eigen::Index>(channel.tones.size()), users);
  return r;
}

void finalize_rates(RateReport& r, const SystemProfile& profile,
                    const MethodSpec& spec) {
  if (spec.integer_bits) r.bits = r.bits.array().floor();
  double basis = spec.use_delta_f ? profile.tone_width_hz : profile.symbol_rate_hz;
  r.user_rate_bps = basis * r.tone_step * r.bits.colwise().sum().transpose();
}

}  // namespace

std::vector<RateReport> method_rate(const ChannelTensor& channel,
                                    const SystemProfile& profile,
                                    const MethodSpec& spec) {
  if (!method_valid_for(spec.id, channel.direction))
    throw std::invalid_argument(std::string("method ") + to_string(spec.id) +
                                " is not valid for direction " +
                                to_string(channel.direction));
  const int n = channel.lines;
  const double sigma2 = noise_power_mw(profile);
  const std::vector<double> power = tone_power_table_mw(profile);
  const std::size_t tones = channel.tones.size();

  std::vector<RateReport> out;
  if (spec.id == MethodId::mac_sum) {
    out.push_back(make_report(channel, profile, "mac_sum", 1));
  } else if (spec.id == MethodId::zf_bounds) {
    out.push_back(make_report(channel, profile, "zf_lower", n));
    out.push_back(make_report(channel, profile, "zf_upper", n));
  } else {
    out.push_back(make_report(channel, profile, to_string(spec.id), n));
  }

  for (std::size_t t = 0; t < tones; ++t) {
    const MatrixC& h = channel.h[t];
    const double px = power[static_cast<std::size_t>(channel.tones[t])];
    const auto row = static_cast<Eigen::Index>(t);
    try {
      if (spec.id == MethodId::mac_sum) {
        double c = mac_sum_capacity(h, VectorR::Constant(n, px), sigma2);
        out[0].bits(row, 0) = c;
        out[0].snr(row, 0) = std::pow(2.0, c) - 1.0;
      } else if (spec.id == MethodId::zf_bounds) {
        double beta = diag_dominance(h).beta;
        for (int i = 0; i < n; ++i) {
          auto [lo, hi] =
              zf_rate_bounds(h(i, i), beta, px, sigma2, profile.snr_gap_db);
          out[0].bits(row, i) = std::min(lo, double(profile.bit_cap));
          out[1].bits(row, i) = std::min(hi, double(profile.bit_cap));
          double swp = px * std::norm(h(i, i)) / sigma2;
          double f = std::max(0.0, 1.0 - 2.0 * beta - beta * beta);
          out[0].snr(row, i) = swp * f;
          out[1].snr(row, i) = swp * (1.0 + beta);
        }
      } else {
        VectorR snr = method_tone_snr(h, spec, channel.direction, px, sigma2);
        for (int i = 0; i < n; ++i) {
          out[0].snr(row, i) = snr(i);
          out[0].bits(row, i) =
              bits_per_tone(snr(i), profile.snr_gap_db, profile.bit_cap);
        }
      }
    } catch (const SingularChannelError&) {
      for (RateReport& r : out) {
        r.bits.row(row).setZero();
        r.snr.row(row).setZero();
        r.warnings.push_back("tone " + std::to_string(channel.tones[t]) +
                             " skipped: singular channel");
      }
    }
  }

  for (RateReport& r : out) finalize_rates(r, profile, spec);
  return out;
}

}  // namespace gfastsim
