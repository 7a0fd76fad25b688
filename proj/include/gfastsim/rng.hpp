#pragma once
// Deterministic random streams. Channel realizations must be reproducible
// bit-for-bit across runs and independent of thread scheduling, so streams
// are derived from (seed, tag, indices) keys instead of sharing one
// sequential generator, and the normal sampler is hand-rolled (the standard
// library distributions are implementation-defined).

#include <cstdint>
#include <cmath>

namespace gfastsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4);
  return splitmix64_next(h);
}

// Substream tags keep draws for different purposes independent.
enum StreamTag : std::uint64_t {
  kPairOffsetTag = 0x01,
  kTonePhaseTag = 0x02,
  kTrainingTag = 0x03,
  kNoiseTag = 0x04,
  kTestTag = 0x7f,
};

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t tag,
                                std::uint64_t a = 0, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
  std::uint64_t h = hash_combine(0x8f1bbcdcbfa53e0bULL, seed);
  h = hash_combine(h, tag);
  h = hash_combine(h, a);
  h = hash_combine(h, b);
  return hash_combine(h, c);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform on [0, 1): 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; first factor on (0, 1] so log stays finite.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gfastsim
