#pragma once
/**
 * Adaptive upstream cancellation: data-aided matrix LMS and the two-stage
 * variant that periodically folds the converged filter into a fixed
 * preprocessing stage, shrinking the condition number seen by the recursion.
 */

#include <cstdint>
#include <string_view>
#include <vector>

#include "gfastsim/types.hpp"

namespace gfastsim {

enum class AdaptMode { lms, two_stage };
AdaptMode adapt_mode_from_string(std::string_view s);
const char* to_string(AdaptMode m);

struct LmsState {
  MatrixC f;      // canceler, output z = f^H y_in
  MatrixC f_pre;  // preprocessing stage, y_in = f_pre^H y; identity initially
  double mu = 0.0;
  long t = 0;
  bool two_stage = false;
  std::vector<double> mse_curve;  // ||e||^2 / N per iteration
};

LmsState make_lms_state(int n, double mu, bool two_stage);

// One recursion step against known training symbols x.
void lms_step(LmsState& s, const VectorC& y, const VectorC& x);

// Fold the current filter into the preprocessing stage (F_p <- F_p * F,
// F <- I). The end-to-end map (F_p F)^H is preserved.
void two_stage_update(LmsState& s);

// Correlation of the LMS input: F_p^H (P_x H H^H + sigma^2 I) F_p.
MatrixC input_correlation(const MatrixC& h, double px, double sigma2,
                          const MatrixC& f_pre);

// Condition number of a Hermitian PSD matrix from its eigenvalues.
double hermitian_condition(const MatrixC& a);

struct AdaptationSchedule {
  AdaptMode mode = AdaptMode::lms;
  double mu_hat = 0.1;  // normalized step; mu = mu_hat / trace(input correlation)
  long iterations = 10000;
  std::vector<long> update_instants;  // two_stage folds; empty = default spacing
  std::uint64_t seed = 1;
};

// Geometric default {100, 300, 1000, 3000, ...} below the iteration count.
std::vector<long> default_update_instants(long iterations);

struct AdaptationResult {
  LmsState state;
  // Input-correlation condition numbers at each applied update instant.
  std::vector<double> cond_before;
  std::vector<double> cond_after;
};

// Simulates y = H x + w with i.i.d. QPSK training of power P_x; deterministic
// in schedule.seed. mu is renormalized after every two-stage fold.
AdaptationResult run_adaptation(const MatrixC& h, double px, double sigma2,
                                const AdaptationSchedule& schedule);

// First iteration whose trailing `window` mean drops `drop_db` below the
// initial-window mean; -1 if never reached.
long reach_iteration(const std::vector<double>& curve, double drop_db,
                     int window = 50);

}  // namespace gfastsim
