#pragma once
// Square QAM constellations with unit average energy; provides slicing and
// the modulo region half-edge used by precoding.

#include <cmath>
#include <stdexcept>

#include "gfastsim/rng.hpp"
#include "gfastsim/types.hpp"

namespace gfastsim {

class Qam {
 public:
  // bits must be even and >= 2 (square grid of 2^bits points).
  explicit Qam(int bits) : bits_(bits) {
    if (bits < 2 || bits % 2 != 0)
      throw std::invalid_argument("Qam: bits must be even and >= 2");
    side_ = 1 << (bits / 2);
    // Levels are (2m - side + 1) * h; h normalizes E|x|^2 to 1.
    h_ = std::sqrt(3.0 / (2.0 * (static_cast<double>(side_) * side_ - 1.0)));
  }

  int bits() const { return bits_; }
  int side() const { return side_; }
  double spacing() const { return 2.0 * h_; }

  // Half-edge A of the modulo square; constellation points lie strictly inside.
  double half_edge() const { return side_ * h_; }

  Complex point(int re_index, int im_index) const {
    return {level(re_index), level(im_index)};
  }

  Complex nearest(Complex v) const {
    return {level(clamp_index(v.real())), level(clamp_index(v.imag()))};
  }

  Complex random_symbol(Rng& rng) const {
    int re = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(side_));
    int im = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(side_));
    return point(re, im);
  }

 private:
  double level(int index) const { return (2.0 * index - side_ + 1.0) * h_; }

  int clamp_index(double x) const {
    int idx = static_cast<int>(std::lround((x / h_ + side_ - 1.0) / 2.0));
    if (idx < 0) idx = 0;
    if (idx >= side_) idx = side_ - 1;
    return idx;
  }

  int bits_;
  int side_;
  double h_;
};

// Fold both components into [-a, a).
inline Complex modulo_2a(Complex v, double a) {
  double span = 2.0 * a;
  double re = v.real() - span * std::floor((v.real() + a) / span);
  double im = v.imag() - span * std::floor((v.imag() + a) / span);
  return {re, im};
}

}  // namespace gfastsim
