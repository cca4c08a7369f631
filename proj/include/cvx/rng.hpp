// Deterministic, splittable random streams. All randomness in the library
// flows through explicit Rng values; there is no ambient RNG state.
#ifndef CVX_RNG_HPP
#define CVX_RNG_HPP

#include <cstdint>
#include <cmath>

#include "cvx/common.hpp"

namespace cvx {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// xoshiro-style generator seeded through splitmix64. Identical output on
// every platform for a given (seed, stream) pair.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x5851f42d4c957f2dULL * (stream + 1));
    for (int i = 0; i < 4; ++i) s_[i] = detail::splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  // Child stream; deterministic function of the parent seed and the id.
  Rng split(std::uint64_t id) const {
    std::uint64_t x = s_[0] ^ (s_[1] * 0x9e3779b97f4a7c15ULL) ^ id;
    return Rng(detail::splitmix64(x), id);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int n) {  // in [0, n)
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Box-Muller (no libm distribution objects, so the
  // stream is reproducible across standard libraries).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Uniform on the unit sphere S^{n-1}.
  Vec unit_vector(int n) {
    Vec v = normal_vec(n);
    double nrm = v.norm();
    while (nrm < 1e-12) {
      v = normal_vec(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

  // Uniform inside the ball of given radius (direction times U^{1/n}).
  Vec point_in_ball(int n, double radius) {
    const double r = radius * std::pow(uniform01(), 1.0 / n);
    return r * unit_vector(n);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cvx

#endif  // CVX_RNG_HPP
