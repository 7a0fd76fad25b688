#pragma once
/**
 * Upstream receive-side crosstalk cancellation: linear ZF, linear MMSE,
 * approximate ZF (single Jacobi sweep), and QR-based ZF-GDFE with successive
 * detection, each exposing the per-user post-processing SNR. The kernels are
 * free functions over Eigen expressions; all of them are pure.
 */

#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gfastsim/channel.hpp"
#include "gfastsim/qam.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim {

inline constexpr double kConditionLimit = 1e12;

enum class CancelMethod { none, zf, mmse, azf, zf_gdfe };
CancelMethod cancel_method_from_string(std::string_view s);
const char* to_string(CancelMethod m);

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                                  Eigen::Dynamic>;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& h, const char* who) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": square matrix required");
}

inline std::vector<int> natural_order(Eigen::Index n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = int(i);
  return order;
}

inline void require_permutation(const std::vector<int>& order, Eigen::Index n,
                                const char* who) {
  if (static_cast<Eigen::Index>(order.size()) != n)
    throw std::invalid_argument(std::string(who) + ": ordering size mismatch");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int u : order) {
    if (u < 0 || u >= n || seen[static_cast<std::size_t>(u)])
      throw std::invalid_argument(std::string(who) + ": ordering is not a permutation");
    seen[static_cast<std::size_t>(u)] = 1;
  }
}

}  // namespace detail

// 1-norm condition estimate from an LU factorization.
template <typename Derived>
double condition_estimate(const Eigen::MatrixBase<Derived>& h) {
  detail::require_square(h, "condition_estimate");
  Eigen::PartialPivLU<PlainMatrix<Derived>> lu(h.derived());
  double rc = lu.rcond();
  if (!(rc > 0)) return std::numeric_limits<double>::infinity();
  return 1.0 / rc;
}

template <typename Derived>
PlainMatrix<Derived> zf_canceler(const Eigen::MatrixBase<Derived>& h) {
  detail::require_square(h, "zf_canceler");
  Eigen::PartialPivLU<PlainMatrix<Derived>> lu(h.derived());
  double rc = lu.rcond();
  if (!(rc > 1.0 / kConditionLimit))
    throw SingularChannelError("zf_canceler: channel condition estimate exceeds limit");
  return lu.inverse();
}

template <typename Derived>
VectorR zf_snr(const Eigen::MatrixBase<Derived>& h, double px, double sigma2) {
  PlainMatrix<Derived> f = zf_canceler(h);
  VectorR noise = f.rowwise().squaredNorm();
  return (px / (sigma2 * noise.array())).matrix();
}

// F = (H^H H + nsr I)^-1 H^H with nsr = sigma^2 / P_x > 0.
template <typename Derived>
PlainMatrix<Derived> mmse_canceler(const Eigen::MatrixBase<Derived>& h,
                                   double nsr) {
  detail::require_square(h, "mmse_canceler");
  if (!(nsr > 0))
    throw std::invalid_argument("mmse_canceler: noise-to-signal ratio must be > 0");
  PlainMatrix<Derived> a = h.adjoint() * h.derived();
  a.diagonal().array() += nsr;
  return a.ldlt().solve(PlainMatrix<Derived>(h.adjoint()));
}

// Unbiased per-user SINR: 1 / [(I + (P_x/sigma^2) H^H H)^-1]_ii - 1.
template <typename Derived>
VectorR mmse_snr(const Eigen::MatrixBase<Derived>& h, double px,
                 double sigma2) {
  detail::require_square(h, "mmse_snr");
  const Eigen::Index n = h.rows();
  PlainMatrix<Derived> a = (px / sigma2) * (h.adjoint() * h.derived());
  a.diagonal().array() += 1.0;
  PlainMatrix<Derived> inv =
      a.ldlt().solve(PlainMatrix<Derived>::Identity(n, n));
  VectorR snr(n);
  for (Eigen::Index i = 0; i < n; ++i)
    snr(i) = 1.0 / std::real(inv(i, i)) - 1.0;
  return snr;
}

// F = (I - D^-1 E) D^-1 with D = diag(H), E = H - D.
template <typename Derived>
PlainMatrix<Derived> azf_canceler(const Eigen::MatrixBase<Derived>& h) {
  detail::require_square(h, "azf_canceler");
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(h(i, i)) == 0.0)
      throw SingularDiagonalError("azf_canceler: zero diagonal entry");
  PlainMatrix<Derived> dinv_e = h.derived();
  dinv_e.diagonal().setZero();
  for (Eigen::Index i = 0; i < n; ++i) dinv_e.row(i) /= h(i, i);
  PlainMatrix<Derived> f = -dinv_e;
  f.diagonal().array() += 1.0;
  for (Eigen::Index j = 0; j < n; ++j) f.col(j) /= h(j, j);
  return f;
}

// SINR from the exact residual T = F H (azf leaves O(beta^2) leakage).
template <typename Derived>
VectorR azf_snr(const Eigen::MatrixBase<Derived>& h, double px, double sigma2) {
  PlainMatrix<Derived> f = azf_canceler(h);
  PlainMatrix<Derived> t = f * h.derived();
  const Eigen::Index n = h.rows();
  VectorR snr(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double signal = px * std::norm(t(i, i));
    double interference = px * (t.row(i).squaredNorm() - std::norm(t(i, i)));
    double noise = sigma2 * f.row(i).squaredNorm();
    snr(i) = signal / (interference + noise);
  }
  return snr;
}

struct GdfeFactor {
  MatrixC q;               // unitary
  MatrixC r;               // upper triangular, real positive diagonal
  std::vector<int> order;  // order[m] = user whose column sits at position m
};

// QR of the column-permuted channel: Q R = H P(order). Successive detection
// runs from the last row upward, so order.back() is detected first and
// order.front() last.
template <typename Derived>
GdfeFactor gdfe_decompose(const Eigen::MatrixBase<Derived>& h,
                          std::vector<int> order = {}) {
  detail::require_square(h, "gdfe_decompose");
  const Eigen::Index n = h.rows();
  if (order.empty()) order = detail::natural_order(n);
  detail::require_permutation(order, n, "gdfe_decompose");
  if (!(condition_estimate(h) < kConditionLimit))
    throw SingularChannelError("gdfe_decompose: channel condition estimate exceeds limit");

  MatrixC hp(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    hp.col(m) = h.derived().col(order[static_cast<std::size_t>(m)]);
  Eigen::HouseholderQR<MatrixC> qr(hp);
  GdfeFactor g;
  g.q = qr.householderQ();
  g.r = qr.matrixQR().template triangularView<Eigen::Upper>();
  g.order = std::move(order);
  // Normalize the R diagonal to be real positive; fold phases into Q.
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex d = g.r(m, m);
    double mag = std::abs(d);
    Complex phase = mag > 0 ? d / mag : Complex(1, 0);
    g.r.row(m) *= std::conj(phase);
    g.q.col(m) *= phase;
  }
  return g;
}

template <typename Derived>
VectorR gdfe_snr(const Eigen::MatrixBase<Derived>& h,
                 const std::vector<int>& order, double px, double sigma2) {
  GdfeFactor g = gdfe_decompose(h, order);
  const Eigen::Index n = h.rows();
  VectorR snr(n);
  for (Eigen::Index m = 0; m < n; ++m)
    snr(g.order[static_cast<std::size_t>(m)]) =
        px * std::norm(g.r(m, m)) / sigma2;
  return snr;
}

// Successive hard detection. Feedback uses past decisions unless genie
// symbols (the true transmit vector) are supplied.
template <typename Derived>
VectorC dfe_detect(const Eigen::MatrixBase<Derived>& h, const VectorC& y,
                   const Qam& constellation, std::vector<int> order = {},
                   const VectorC* genie = nullptr) {
  GdfeFactor g = gdfe_decompose(h, std::move(order));
  const Eigen::Index n = h.rows();
  if (y.size() != n) throw std::invalid_argument("dfe_detect: size mismatch");
  VectorC z = g.q.adjoint() * y;
  VectorC decided(n);  // position space
  VectorC out(n);
  for (Eigen::Index m = n - 1; m >= 0; --m) {
    Complex acc = z(m);
    for (Eigen::Index i = m + 1; i < n; ++i) {
      Complex fb = genie ? (*genie)(g.order[static_cast<std::size_t>(i)])
                         : decided(i);
      acc -= g.r(m, i) * fb;
    }
    decided(m) = constellation.nearest(acc / g.r(m, m));
    out(g.order[static_cast<std::size_t>(m)]) = decided(m);
  }
  return out;
}

template <typename Derived>
double swp_snr(const Eigen::MatrixBase<Derived>& h, Eigen::Index i, double px,
               double sigma2) {
  return px * std::norm(h(i, i)) / sigma2;
}

// Matched filter bound: all receive dimensions serve user i alone. User i's
// signature is column i upstream and row i downstream.
template <typename Derived>
double mfb_snr(const Eigen::MatrixBase<Derived>& h, Eigen::Index i, double px,
               double sigma2, Direction dir = Direction::upstream) {
  double energy = dir == Direction::upstream ? h.col(i).squaredNorm()
                                             : h.row(i).squaredNorm();
  return px * energy / sigma2;
}

template <typename Derived>
VectorR no_cancellation_snr(const Eigen::MatrixBase<Derived>& h, double px,
                            double sigma2) {
  detail::require_square(h, "no_cancellation_snr");
  const Eigen::Index n = h.rows();
  VectorR snr(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double signal = px * std::norm(h(i, i));
    double interference = px * (h.row(i).squaredNorm() - std::norm(h(i, i)));
    snr(i) = signal / (sigma2 + interference);
  }
  return snr;
}

inline CancelMethod cancel_method_from_string(std::string_view s) {
  if (s == "none") return CancelMethod::none;
  if (s == "zf") return CancelMethod::zf;
  if (s == "mmse") return CancelMethod::mmse;
  if (s == "azf") return CancelMethod::azf;
  if (s == "zf_gdfe") return CancelMethod::zf_gdfe;
  throw std::invalid_argument("unknown canceler method: " + std::string(s));
}

inline const char* to_string(CancelMethod m) {
  switch (m) {
    case CancelMethod::none: return "none";
    case CancelMethod::zf: return "zf";
    case CancelMethod::mmse: return "mmse";
    case CancelMethod::azf: return "azf";
    case CancelMethod::zf_gdfe: return "zf_gdfe";
  }
  return "?";
}

// Per-user SNR for one tone under the selected canceler.
template <typename Derived>
VectorR canceler_snr(const Eigen::MatrixBase<Derived>& h, CancelMethod method,
                     double px, double sigma2,
                     const std::vector<int>& order = {}) {
  switch (method) {
    case CancelMethod::none: return no_cancellation_snr(h, px, sigma2);
    case CancelMethod::zf: return zf_snr(h, px, sigma2);
    case CancelMethod::mmse: return mmse_snr(h, px, sigma2);
    case CancelMethod::azf: return azf_snr(h, px, sigma2);
    case CancelMethod::zf_gdfe: return gdfe_snr(h, order, px, sigma2);
  }
  throw std::logic_error("canceler_snr: unreachable");
}

}  // namespace gfastsim
