// Seeded generators for test bodies.
#ifndef CVX_RANDOM_BODIES_HPP
#define CVX_RANDOM_BODIES_HPP

#include <vector>

#include "cvx/polytope.hpp"
#include "cvx/rng.hpp"

namespace cvx {

// Convex hull of `points` uniform directions on the sphere (default 4n),
// optionally closed under negation. Full-dimensional and well-conditioned.
inline Polytope random_polytope(int n, Rng& rng, int points = 0,
                                bool symmetrize = true) {
  if (points <= 0) points = 4 * n;
  std::vector<Vec> pts;
  pts.reserve(symmetrize ? 2 * points : points);
  for (int i = 0; i < points; ++i) {
    Vec u = rng.unit_vector(n);
    pts.push_back(u);
    if (symmetrize) pts.push_back(-u);
  }
  return make_polytope_from_points(pts);
}

// Random nondegenerate linear map with entries from a seeded Gaussian;
// resampled until reasonably conditioned.
inline LinearMap random_gl(int n, Rng& rng, double spread = 1.0) {
  for (int tries = 0; tries < 64; ++tries) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = spread * rng.normal();
    Eigen::JacobiSVD<Mat> svd(m);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin > 0.05 * smax && smin > 1e-6) return make_linear_map(m);
  }
  fail(ErrorCode::Singular, "random_gl: could not draw a conditioned matrix");
}

inline LinearMap random_sl(int n, Rng& rng) {
  LinearMap t = random_gl(n, rng);
  const double scale = std::pow(std::abs(t.det), -1.0 / n);
  Mat m = t.matrix * scale;
  if (t.det < 0) m.col(0) *= -1.0;
  return make_linear_map(m);
}

}  // namespace cvx

#endif  // CVX_RANDOM_BODIES_HPP
