#pragma once
/**
 * Binder channel model: deterministic direct-path insertion loss plus
 * stochastic FEXT coupling (log-normal magnitude, uniform phase), generated
 * per tone as an N x N complex matrix, with diagonal-dominance metrics.
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gfastsim/profile.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim {

struct CableModel {
  std::string name;
  // Insertion loss in dB per 100 m: il_a0 + il_a1*sqrt(f_MHz) + il_a2*f_MHz.
  double il_a0 = 0.0;
  double il_a1 = 0.0;
  double il_a2 = 0.0;
  // Mean FEXT coupling constant, linear power per Hz^2 per m.
  double chi_fext = 0.0;
  double fext_breakpoint_hz = 75e6;
  double fext_slope_hi = 1.2;
  double sigma_fext_db = 4.0;
};

// Known cables: cat5, cad55, generic (alias of cat5).
CableModel make_cable(std::string_view name);

// chi_fext giving mean coupling `coupling_db` (dB relative to the direct
// path) at reference frequency and coupling length.
double chi_from_coupling_db(double coupling_db, double f_ref_hz = 10e6,
                            double d_ref_m = 100.0);

void validate_cable(const CableModel& c);

struct BinderTopology {
  int lines = 0;
  std::vector<double> length_m;
  CableModel cable;
};

BinderTopology equal_binder(int lines, double length_m, CableModel cable);
BinderTopology spread_binder(double min_m, double max_m, double step_m,
                             CableModel cable);
void validate_topology(const BinderTopology& t);

// Shared binder run between lines i and j as seen from the distribution point.
double coupling_length_m(const BinderTopology& t, int i, int j);

enum class Direction { upstream, downstream };
Direction direction_from_string(std::string_view s);
const char* to_string(Direction d);

struct ChannelTensor {
  Direction direction = Direction::upstream;
  std::uint64_t seed = 0;
  int lines = 0;
  int tone_step = 1;
  std::vector<int> tones;       // absolute tone indices, strided when decimated
  std::vector<double> freq_hz;  // per stored tone
  std::vector<MatrixC> h;       // per stored tone, lines x lines
  std::vector<double> length_m; // per line, carried for reporting
};

double insertion_loss_db(const CableModel& c, double f_hz, double l_m);
Complex direct_gain(const CableModel& c, double f_hz, double l_m);

// Mean FEXT power E|H_ij|^2 into a victim, given the disturber direct-path
// power; dual-slope frequency dependence, continuous at the breakpoint.
double fext_coupling_std(const CableModel& c, double f_hz, double d_m,
                         double direct_power);

// One upstream channel matrix at absolute tone index k. Draws depend only on
// (seed, k, pair), so any tone subset yields the same matrices.
MatrixC channel_matrix(const BinderTopology& t, double f_hz, int tone_index,
                       std::uint64_t seed);

ChannelTensor generate_channel(const BinderTopology& t,
                               const SystemProfile& profile,
                               std::uint64_t seed, Direction direction,
                               int tone_step = 1);

struct DiagDominance {
  double beta_row = 0.0;
  double beta_col = 0.0;
  double beta = 0.0;
};

template <typename Derived>
DiagDominance diag_dominance(const Eigen::MatrixBase<Derived>& h) {
  const auto& m = h.derived();
  if (m.rows() != m.cols())
    throw std::invalid_argument("diag_dominance: square matrix required");
  DiagDominance d;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double diag = std::abs(m(i, i));
    if (diag == 0.0)
      throw SingularDiagonalError("diag_dominance: zero diagonal entry");
    double row = 0.0, col = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j == i) continue;
      row += std::abs(m(i, j));
      col += std::abs(m(j, i));
    }
    d.beta_row = std::max(d.beta_row, row / diag);
    d.beta_col = std::max(d.beta_col, col / diag);
  }
  d.beta = std::max(d.beta_row, d.beta_col);
  return d;
}

}  // namespace gfastsim
