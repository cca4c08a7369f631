// Basic numeric types, tolerances and error codes shared across the library.
#ifndef CVX_COMMON_HPP
#define CVX_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Absolute geometric tolerance, valid after bodies are conditioned to
// circumradius in [1/2, 2].
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kTightTol = 1e-12;

enum class ErrorCode {
  Unbounded,
  DegenerateFacet,
  LowerDimensional,
  Singular,
  UnknownKind,
  EmptySection,
  NotFullDimensional,
  NoConvergence,
  NotSymmetric,
  InfeasibleMeasure,
  AllFacetsDropped,
  NonPositiveRadial,
  GridMismatch,
  OriginNotInterior,
  BadInput,
};

class GeomError : public std::runtime_error {
 public:
  GeomError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw GeomError(code, what);
}

// Volume of the n-dimensional Euclidean unit ball.
inline double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Surface area of the unit sphere S^{n-1}.
inline double sphere_surface_area(int n) { return n * unit_ball_volume(n); }

// Radius of the Euclidean ball of volume 1 in dimension n.
inline double unit_volume_ball_radius(int n) {
  return std::pow(unit_ball_volume(n), -1.0 / n);
}

// Power-of-two scale factor bringing r into [1, 2). Scaling by it is exact
// in binary floating point.
inline double pow2_rescale(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::BadInput, "bad scale");
  int e = 0;
  std::frexp(r, &e);  // r = f * 2^e, f in [1/2,1)
  return std::ldexp(1.0, 1 - e);
}

inline bool approx_eq(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

}  // namespace cvx

#endif  // CVX_COMMON_HPP
