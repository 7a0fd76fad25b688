#include "gfastsim/adaptive.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gfastsim/qam.hpp"
#include "gfastsim/rng.hpp"

namespace gfastsim {

AdaptMode adapt_mode_from_string(std::string_view s) {
  if (s == "lms") return AdaptMode::lms;
  if (s == "two_stage") return AdaptMode::two_stage;
  throw std::invalid_argument("unknown adaptation mode: " + std::string(s));
}

const char* to_string(AdaptMode m) {
  return m == AdaptMode::lms ? "lms" : "two_stage";
}

LmsState make_lms_state(int n, double mu, bool two_stage) {
  if (n < 1) throw std::invalid_argument("make_lms_state: need n >= 1");
  if (mu < 0) throw std::invalid_argument("make_lms_state: mu must be >= 0");
  LmsState s;
  s.f = MatrixC::Zero(n, n);
  s.f_pre = MatrixC::Identity(n, n);
  s.mu = mu;
  s.two_stage = two_stage;
  return s;
}

void lms_step(LmsState& s, const VectorC& y, const VectorC& x) {
  const Eigen::Index n = s.f.rows();
  if (y.size() != n || x.size() != n)
    throw std::invalid_argument("lms_step: dimension mismatch");
  VectorC y_in = s.two_stage ? VectorC(s.f_pre.adjoint() * y) : y;
  VectorC e = x - s.f.adjoint() * y_in;
  s.f += 2.0 * s.mu * y_in * e.adjoint();
  s.mse_curve.push_back(e.squaredNorm() / static_cast<double>(n));
  ++s.t;
}

void two_stage_update(LmsState& s) {
  if (!s.two_stage)
    throw std::logic_error("two_stage_update: state is not in two-stage mode");
  s.f_pre = s.f_pre * s.f;
  s.f = MatrixC::Identity(s.f.rows(), s.f.cols());
}

MatrixC input_correlation(const MatrixC& h, double px, double sigma2,
                          const MatrixC& f_pre) {
  MatrixC r_yy = px * (h * h.adjoint());
  r_yy.diagonal().array() += sigma2;
  return f_pre.adjoint() * r_yy * f_pre;
}

double hermitian_condition(const MatrixC& a) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es(a, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::vector<long> default_update_instants(long iterations) {
  std::vector<long> instants;
  for (long base = 100; base < iterations; base *= 10) {
    instants.push_back(base);
    if (3 * base < iterations) instants.push_back(3 * base);
  }
  return instants;
}

AdaptationResult run_adaptation(const MatrixC& h, double px, double sigma2,
                                const AdaptationSchedule& schedule) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("run_adaptation: square channel required");
  if (schedule.iterations < 0 || schedule.mu_hat < 0)
    throw std::invalid_argument("run_adaptation: invalid schedule");
  const int n = static_cast<int>(h.rows());
  const bool two_stage = schedule.mode == AdaptMode::two_stage;

  AdaptationResult result;
  result.state = make_lms_state(n, 0.0, two_stage);
  LmsState& s = result.state;

  auto renormalize_mu = [&] {
    MatrixC r_in = input_correlation(h, px, sigma2, s.f_pre);
    double tr = r_in.trace().real();
    s.mu = tr > 0 ? schedule.mu_hat / tr : 0.0;
    return r_in;
  };
  renormalize_mu();

  std::vector<long> instants = schedule.update_instants.empty() && two_stage
                                   ? default_update_instants(schedule.iterations)
                                   : schedule.update_instants;
  std::size_t next_instant = 0;

  Qam qpsk(2);
  Rng sym_rng(stream_key(schedule.seed, kTrainingTag));
  Rng noise_rng(stream_key(schedule.seed, kNoiseTag));
  const double amp = std::sqrt(px);
  const double nsd = std::sqrt(sigma2 / 2.0);

  VectorC x(n), w(n);
  for (long t = 0; t < schedule.iterations; ++t) {
    for (int i = 0; i < n; ++i) {
      x(i) = amp * qpsk.random_symbol(sym_rng);
      w(i) = Complex(nsd * noise_rng.normal(), nsd * noise_rng.normal());
    }
    VectorC y = h * x + w;
    lms_step(s, y, x);
    if (two_stage && next_instant < instants.size() &&
        s.t == instants[next_instant]) {
      result.cond_before.push_back(
          hermitian_condition(input_correlation(h, px, sigma2, s.f_pre)));
      two_stage_update(s);
      result.cond_after.push_back(
          hermitian_condition(renormalize_mu()));
      ++next_instant;
    }
  }
  return result;
}

long reach_iteration(const std::vector<double>& curve, double drop_db,
                     int window) {
  if (window < 1 || curve.size() < static_cast<std::size_t>(window)) return -1;
  double ref = 0.0;
  for (int i = 0; i < window; ++i) ref += curve[static_cast<std::size_t>(i)];
  ref /= window;
  double target = ref * db_to_lin(drop_db);
  double acc = ref * window;
  for (std::size_t t = static_cast<std::size_t>(window); t <= curve.size(); ++t) {
    if (acc / window <= target) return static_cast<long>(t) - 1;
    if (t == curve.size()) break;
    acc += curve[t] - curve[t - static_cast<std::size_t>(window)];
  }
  return -1;
}

}  // namespace gfastsim
