// Randomized antipodally-symmetric quadrature grid on the unit sphere.
#ifndef CVX_SPHERE_GRID_HPP
#define CVX_SPHERE_GRID_HPP

#include <cstdint>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/rng.hpp"

namespace cvx {

struct SphereGrid {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<Vec> directions;  // closed under u -> -u, pairs adjacent
  Vec weights;                  // all equal, summing to |S^{n-1}|

  int size() const { return static_cast<int>(directions.size()); }
  double weight_sum() const { return weights.sum(); }

  // Quadrature of f over the sphere (unnormalized).
  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (int j = 0; j < size(); ++j) acc += weights[j] * f(directions[j]);
    return acc;
  }

  // Average of f against the uniform probability measure on the sphere.
  template <typename F>
  double average(F&& f) const {
    return integrate(f) / weight_sum();
  }
};

// m/2 seeded uniform directions plus their antipodes, equal weights
// |S^{n-1}|/m. Odd integrands cancel exactly by construction.
inline SphereGrid sphere_grid(int n, int m, std::uint64_t seed) {
  if (m % 2 != 0 || m < 2 * n)
    fail(ErrorCode::BadInput, "sphere_grid: need m even, m >= 2n");
  SphereGrid g;
  g.n = n;
  g.seed = seed;
  g.directions.reserve(m);
  Rng rng(seed, 0x5f3759df);
  for (int j = 0; j < m / 2; ++j) {
    Vec u = rng.unit_vector(n);
    g.directions.push_back(u);
    g.directions.push_back(-u);
  }
  g.weights = Vec::Constant(m, sphere_surface_area(n) / m);
  return g;
}

}  // namespace cvx

#endif  // CVX_SPHERE_GRID_HPP
