#pragma once
/**
 * Downstream transmit-side pre-compensation: gain-scaled linear ZF precoding
 * and Tomlinson-Harashima precoding (THP). Symbol power is normalized to 1
 * here; the per-tone budget P_k stays outside, so mask feasibility reduces to
 * row norms <= 1 (linear ZF) and the modulo box bound (THP).
 */

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gfastsim/canceler.hpp"
#include "gfastsim/qam.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim {

enum class PrecoderScaling { row_norm, global };

inline PrecoderScaling precoder_scaling_from_string(std::string_view s) {
  if (s == "row_norm") return PrecoderScaling::row_norm;
  if (s == "global") return PrecoderScaling::global;
  throw std::invalid_argument("unknown precoder scaling: " + std::string(s));
}

inline const char* to_string(PrecoderScaling s) {
  return s == PrecoderScaling::row_norm ? "row_norm" : "global";
}

struct LinearPrecoder {
  MatrixC f;     // transmit vector = f * x
  VectorR gain;  // diagonal of G; received Y_i = gain_i * H_ii * X_i + W_i
};

// M = H^-1 diag(H); both scaling modes reduce to the single common factor
// 1 / max_i ||row_i(M)||_2, which also equals 1/sqrt(max_i sum_j |M_ij|^2),
// so every row of F has norm <= 1.
template <typename Derived>
LinearPrecoder zf_precoder(const Eigen::MatrixBase<Derived>& h,
                           PrecoderScaling scaling = PrecoderScaling::row_norm) {
  detail::require_square(h, "zf_precoder");
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(h(i, i)) == 0.0)
      throw SingularDiagonalError("zf_precoder: zero diagonal entry");
  MatrixC m = zf_canceler(h);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) *= h(j, j);
  double max_row = std::sqrt(m.rowwise().squaredNorm().maxCoeff());
  double g = max_row > 0 ? 1.0 / max_row : 1.0;
  (void)scaling;  // row_norm and global coincide for this construction
  LinearPrecoder out;
  out.f = g * m;
  out.gain = VectorR::Constant(n, g);
  return out;
}

template <typename Derived>
VectorR zf_precoder_snr(const Eigen::MatrixBase<Derived>& h,
                        PrecoderScaling scaling, double px, double sigma2) {
  LinearPrecoder p = zf_precoder(h, scaling);
  const Eigen::Index n = h.rows();
  VectorR snr(n);
  for (Eigen::Index i = 0; i < n; ++i)
    snr(i) = px * std::norm(p.gain(i) * h(i, i)) / sigma2;
  return snr;
}

// THP over the QR of H^H: with Q R = (P H)^H, transmitting Q x~ makes the
// effective channel lower triangular, so symbols are pre-cancelled in stage
// order and folded into the modulo box of half-edge A.
class ThpCoder {
 public:
  template <typename Derived>
  ThpCoder(const Eigen::MatrixBase<Derived>& h, std::vector<int> order = {}) {
    detail::require_square(h, "thp");
    const Eigen::Index n = h.rows();
    if (order.empty()) order = detail::natural_order(n);
    detail::require_permutation(order, n, "thp");
    MatrixC hp(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
      hp.row(m) = h.derived().row(order[static_cast<std::size_t>(m)]);
    GdfeFactor f = gdfe_decompose(hp.adjoint());
    q_ = std::move(f.q);
    r_ = std::move(f.r);
    order_ = std::move(order);
  }

  const MatrixC& q() const { return q_; }
  const MatrixC& r() const { return r_; }
  const std::vector<int>& order() const { return order_; }
  int user_at(int stage) const { return order_[static_cast<std::size_t>(stage)]; }
  double stage_gain(int stage) const { return r_(stage, stage).real(); }

  struct Encoded {
    VectorC tx;      // transmit vector Q * folded
    VectorC folded;  // per-stage symbols after pre-cancellation and modulo
  };

  // x holds user-indexed symbols with components inside the box of half-edge a.
  Encoded encode(const VectorC& x, double a) const {
    const Eigen::Index n = q_.rows();
    if (x.size() != n) throw std::invalid_argument("thp encode: size mismatch");
    Encoded e;
    e.folded.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
      Complex acc = x(order_[static_cast<std::size_t>(m)]);
      for (Eigen::Index i = 0; i < m; ++i)
        acc -= std::conj(r_(i, m)) / std::conj(r_(m, m)) * e.folded(i);
      e.folded(m) = modulo_2a(acc, a);
    }
    e.tx = q_ * e.folded;
    return e;
  }

  // Per-user SNR P_x R_mm^2 / sigma^2, mapped back to user indices.
  VectorR snr(double px, double sigma2) const {
    const Eigen::Index n = q_.rows();
    VectorR s(n);
    for (Eigen::Index m = 0; m < n; ++m)
      s(order_[static_cast<std::size_t>(m)]) =
          px * std::norm(r_(m, m)) / sigma2;
    return s;
  }

 private:
  MatrixC q_;
  MatrixC r_;
  std::vector<int> order_;
};

template <typename Derived>
VectorC thp_precode(const Eigen::MatrixBase<Derived>& h, const VectorC& x,
                    double a, std::vector<int> order = {}) {
  return ThpCoder(h, std::move(order)).encode(x, a).tx;
}

inline Complex thp_receive(Complex y, Complex r_mm, double a) {
  if (std::abs(r_mm) == 0.0)
    throw SingularDiagonalError("thp_receive: zero stage gain");
  return modulo_2a(y / r_mm, a);
}

template <typename Derived>
VectorR thp_snr(const Eigen::MatrixBase<Derived>& h,
                const std::vector<int>& order, double px, double sigma2) {
  return ThpCoder(h, order).snr(px, sigma2);
}

enum class PrecodeMethod { none, zf_linear, thp };

inline PrecodeMethod precode_method_from_string(std::string_view s) {
  if (s == "none") return PrecodeMethod::none;
  if (s == "zf_linear") return PrecodeMethod::zf_linear;
  if (s == "thp") return PrecodeMethod::thp;
  throw std::invalid_argument("unknown precoder method: " + std::string(s));
}

inline const char* to_string(PrecodeMethod m) {
  switch (m) {
    case PrecodeMethod::none: return "none";
    case PrecodeMethod::zf_linear: return "zf_linear";
    case PrecodeMethod::thp: return "thp";
  }
  return "?";
}

}  // namespace gfastsim
