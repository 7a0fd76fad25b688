#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace gfastsim {

using Real = double;
using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Channel matrix numerically rank-deficient (condition estimate too large).
struct SingularChannelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Zero direct-path gain where a nonzero diagonal is required.
struct SingularDiagonalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent scenario configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gfastsim
