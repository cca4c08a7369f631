// Polytope representations (facet and vertex form), conversions between
// them, linear images, standard bodies and membership/support oracles.
#ifndef CVX_POLYTOPE_HPP
#define CVX_POLYTOPE_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/hull.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Linear maps
// ---------------------------------------------------------------------------

struct LinearMap {
  Mat matrix;
  double det = 0.0;
};

inline LinearMap make_linear_map(const Mat& m) {
  LinearMap t;
  t.matrix = m;
  t.det = m.determinant();
  return t;
}

inline LinearMap identity_map(int n) { return make_linear_map(Mat::Identity(n, n)); }

inline bool is_special_linear(const LinearMap& t, double tol = 1e-9) {
  return std::abs(t.det - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

struct HPolytope {
  Mat normals;  // one unit row per facet
  Vec offsets;  // <a_i, x> <= b_i
  int dim() const { return static_cast<int>(normals.cols()); }
  int count() const { return static_cast<int>(normals.rows()); }
};

struct VPolytope {
  Mat vertices;  // one row per vertex
  int dim() const { return static_cast<int>(vertices.cols()); }
  int count() const { return static_cast<int>(vertices.rows()); }
};

struct Polytope {
  HPolytope hrep;
  VPolytope vrep;
  bool symmetric = false;
  std::vector<std::vector<int>> facet_vertices;  // vertex indices per facet

  int dim() const { return hrep.dim(); }
  int facet_count() const { return hrep.count(); }
  int vertex_count() const { return vrep.count(); }

  double support(const Vec& u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < vrep.count(); ++i)
      best = std::max(best, vrep.vertices.row(i).dot(u));
    return best;
  }

  bool contains(const Vec& x, double tol = kGeomTol) const {
    for (int i = 0; i < hrep.count(); ++i)
      if (hrep.normals.row(i).dot(x) > hrep.offsets[i] + tol) return false;
    return true;
  }

  double circumradius() const {
    double r = 0.0;
    for (int i = 0; i < vrep.count(); ++i)
      r = std::max(r, vrep.vertices.row(i).norm());
    return r;
  }

  double inradius_origin() const {  // distance from 0 to the nearest facet
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < hrep.count(); ++i) r = std::min(r, hrep.offsets[i]);
    return r;
  }

  Vec vertex(int i) const { return vrep.vertices.row(i).transpose(); }
  Vec normal(int i) const { return hrep.normals.row(i).transpose(); }
};

// Radial function of a polytope with 0 in the interior:
// rho_P(u) = min over facets of b_i / <a_i, u> with positive denominator.
inline double radial(const Polytope& p, const Vec& u) {
  double best = std::numeric_limits<double>::infinity();
  for (int f = 0; f < p.facet_count(); ++f) {
    const double d = p.hrep.normals.row(f).dot(u);
    if (d > 1e-14) best = std::min(best, p.hrep.offsets[f] / d);
  }
  if (!std::isfinite(best))
    fail(ErrorCode::Unbounded, "radial: direction escapes the body");
  return best;
}

// Orthonormal basis of the hyperplane orthogonal to a unit vector
// (columns of the returned n x (n-1) matrix).
inline Mat hyperplane_basis(const Vec& unit_normal) {
  const int n = static_cast<int>(unit_normal.size());
  Eigen::HouseholderQR<Mat> qr(unit_normal);
  Mat q = qr.householderQ();
  Mat basis = q.rightCols(n - 1);
  return basis;
}

namespace polydetail {

inline bool vertex_set_symmetric(const Mat& verts, double tol) {
  const int m = static_cast<int>(verts.rows());
  for (int i = 0; i < m; ++i) {
    bool found = false;
    for (int j = 0; j < m; ++j)
      if ((verts.row(i) + verts.row(j)).norm() <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace polydetail

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

// Vertex enumeration for a bounded facet description with 0 in the interior.
// Works through the polar: vertices of P are the facet planes of
// conv{a_i / b_i}.
inline VPolytope hrep_to_vrep(const HPolytope& h) {
  const int n = h.dim();
  const int m = h.count();
  if (m < n + 1) fail(ErrorCode::Unbounded, "hrep_to_vrep: too few facets");
  for (int i = 0; i < m; ++i)
    if (!(h.offsets[i] > 0.0))
      fail(ErrorCode::OriginNotInterior, "hrep_to_vrep: offsets must be positive");

  std::vector<Vec> polar(m);
  for (int i = 0; i < m; ++i)
    polar[i] = h.normals.row(i).transpose() / h.offsets[i];

  HullResult hull;
  try {
    hull = convex_hull(polar);
  } catch (const GeomError& e) {
    if (e.code() == ErrorCode::LowerDimensional)
      fail(ErrorCode::Unbounded, "hrep_to_vrep: normals do not span");
    throw;
  }

  double scale = 0.0;
  for (const Vec& q : polar) scale = std::max(scale, q.norm());
  VPolytope v;
  v.vertices.resize(hull.facets.size(), n);
  for (size_t f = 0; f < hull.facets.size(); ++f) {
    const double c = hull.facets[f].offset;
    if (c <= kGeomTol * scale)
      fail(ErrorCode::Unbounded, "hrep_to_vrep: normals do not positively span");
    v.vertices.row(f) = (hull.facets[f].normal / c).transpose();
  }
  return v;
}

// Irredundant facet description of the hull of a point set.
inline HPolytope vrep_to_hrep(const VPolytope& v) {
  const int n = v.dim();
  std::vector<Vec> pts(v.count());
  for (int i = 0; i < v.count(); ++i) pts[i] = v.vertices.row(i).transpose();
  HullResult hull = convex_hull(pts);
  HPolytope h;
  h.normals.resize(hull.facets.size(), n);
  h.offsets.resize(hull.facets.size());
  for (size_t f = 0; f < hull.facets.size(); ++f) {
    h.normals.row(f) = hull.facets[f].normal.transpose();
    h.offsets[f] = hull.facets[f].offset;
  }
  return h;
}

// Canonical polytope from a point cloud: extreme points only, tight
// irredundant facets, facet/vertex incidence, symmetry autodetected.
inline Polytope make_polytope_from_points(const std::vector<Vec>& points) {
  if (points.empty()) fail(ErrorCode::BadInput, "make_polytope: no points");
  const int n = static_cast<int>(points[0].size());
  HullResult hull = convex_hull(points);

  Polytope p;
  p.vrep.vertices.resize(hull.vertices.size(), n);
  std::vector<int> inv(points.size(), -1);
  for (size_t i = 0; i < hull.vertices.size(); ++i) {
    p.vrep.vertices.row(i) = points[hull.vertices[i]].transpose();
    inv[hull.vertices[i]] = static_cast<int>(i);
  }
  p.hrep.normals.resize(hull.facets.size(), n);
  p.hrep.offsets.resize(hull.facets.size());
  p.facet_vertices.resize(hull.facets.size());
  for (size_t f = 0; f < hull.facets.size(); ++f) {
    p.hrep.normals.row(f) = hull.facets[f].normal.transpose();
    p.hrep.offsets[f] = hull.facets[f].offset;
    for (int pi : hull.facets[f].points)
      if (inv[pi] >= 0) p.facet_vertices[f].push_back(inv[pi]);
  }
  double r = p.circumradius();
  p.symmetric = polydetail::vertex_set_symmetric(p.vrep.vertices, kGeomTol * std::max(1.0, r));
  return p;
}

inline Polytope make_polytope(const VPolytope& v) {
  std::vector<Vec> pts(v.count());
  for (int i = 0; i < v.count(); ++i) pts[i] = v.vertices.row(i).transpose();
  return make_polytope_from_points(pts);
}

inline Polytope make_polytope(const HPolytope& h) {
  VPolytope v = hrep_to_vrep(h);
  return make_polytope(v);
}

// Both representations supplied and trusted (used by the exact standard
// bodies); incidence is recomputed, nothing else touched.
inline Polytope make_polytope_trusted(HPolytope h, VPolytope v, bool symmetric) {
  Polytope p;
  p.hrep = std::move(h);
  p.vrep = std::move(v);
  p.symmetric = symmetric;
  const double r = std::max(1.0, p.circumradius());
  p.facet_vertices.assign(p.facet_count(), {});
  for (int f = 0; f < p.facet_count(); ++f)
    for (int i = 0; i < p.vertex_count(); ++i)
      if (std::abs(p.hrep.normals.row(f).dot(p.vrep.vertices.row(i)) -
                   p.hrep.offsets[f]) <= kGeomTol * r)
        p.facet_vertices[f].push_back(i);
  return p;
}

// Consistency of the two carried representations, per the construction
// contract: vertices satisfy all inequalities, every facet is supported by
// >= n affinely independent vertices, normals pairwise distinct.
inline void validate_polytope(const Polytope& p, bool require_origin_interior = true) {
  const int n = p.dim();
  const double r = std::max(1.0, p.circumradius());
  const double tol = kGeomTol * r;
  for (int i = 0; i < p.vertex_count(); ++i)
    for (int f = 0; f < p.facet_count(); ++f)
      if (p.hrep.normals.row(f).dot(p.vrep.vertices.row(i)) >
          p.hrep.offsets[f] + tol)
        fail(ErrorCode::BadInput, "polytope: vertex violates facet");
  for (int f = 0; f < p.facet_count(); ++f) {
    const auto& sup = p.facet_vertices[f];
    if (static_cast<int>(sup.size()) < n)
      fail(ErrorCode::DegenerateFacet, "polytope: facet with too few vertices");
    Mat centered(sup.size() - 1, n);
    for (size_t k = 1; k < sup.size(); ++k)
      centered.row(k - 1) =
          p.vrep.vertices.row(sup[k]) - p.vrep.vertices.row(sup[0]);
    Eigen::JacobiSVD<Mat> svd(centered);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()[k] > 1e-8 * r) ++rank;
    if (rank < n - 1)
      fail(ErrorCode::DegenerateFacet, "polytope: facet not full-dimensional");
  }
  for (int f = 0; f < p.facet_count(); ++f)
    for (int g = f + 1; g < p.facet_count(); ++g)
      if ((p.hrep.normals.row(f) - p.hrep.normals.row(g)).norm() <= 1e-9)
        fail(ErrorCode::BadInput, "polytope: duplicate facet normals");
  if (require_origin_interior)
    for (int f = 0; f < p.facet_count(); ++f)
      if (!(p.hrep.offsets[f] > 0.0))
        fail(ErrorCode::OriginNotInterior, "polytope: origin not interior");
  if (p.symmetric &&
      !polydetail::vertex_set_symmetric(p.vrep.vertices, tol))
    fail(ErrorCode::NotSymmetric, "polytope: symmetric flag inconsistent");
}

// ---------------------------------------------------------------------------
// Linear images
// ---------------------------------------------------------------------------

// T K: vertices map by T, facet normals by the inverse transpose (then
// renormalized, offsets rescaled). Incidence is combinatorially unchanged.
inline Polytope apply_map(const Polytope& p, const LinearMap& t) {
  if (std::abs(t.det) < 1e-12)
    fail(ErrorCode::Singular, "apply_map: singular matrix");
  const int n = p.dim();
  Polytope q = p;
  q.vrep.vertices = p.vrep.vertices * t.matrix.transpose();
  const Mat tinv_t = t.matrix.inverse().transpose();
  for (int f = 0; f < p.facet_count(); ++f) {
    Vec a = tinv_t * p.hrep.normals.row(f).transpose();
    const double nn = a.norm();
    q.hrep.normals.row(f) = (a / nn).transpose();
    q.hrep.offsets[f] = p.hrep.offsets[f] / nn;
  }
  (void)n;
  return q;
}

// ---------------------------------------------------------------------------
// Standard bodies and oracles
// ---------------------------------------------------------------------------

// Non-polytopal bodies (balls) are carried as evaluator bundles.
struct BodyOracle {
  int n = 0;
  std::string kind;
  std::function<bool(const Vec&)> member;
  std::function<double(const Vec&)> support;  // positively homogeneous
  std::function<double(const Vec&)> radial;   // on unit directions
  Vec box_lo, box_hi;                          // bounding box
  double volume = 0.0;
  double surface_area = 0.0;
};

inline BodyOracle make_ball_oracle(int n, double radius) {
  BodyOracle b;
  b.n = n;
  b.kind = "ball";
  b.member = [radius](const Vec& x) { return x.norm() <= radius; };
  b.support = [radius](const Vec& u) { return radius * u.norm(); };
  b.radial = [radius](const Vec&) { return radius; };
  b.box_lo = Vec::Constant(n, -radius);
  b.box_hi = Vec::Constant(n, radius);
  b.volume = unit_ball_volume(n) * std::pow(radius, n);
  b.surface_area = n * unit_ball_volume(n) * std::pow(radius, n - 1);
  return b;
}

// Axis-aligned box [-w_1,w_1] x ... x [-w_n,w_n] with exact incidence.
inline Polytope make_box(const Vec& half_widths) {
  const int n = static_cast<int>(half_widths.size());
  if (n > 16) fail(ErrorCode::BadInput, "make_box: dimension too large");
  for (int i = 0; i < n; ++i)
    if (!(half_widths[i] > 0.0)) fail(ErrorCode::BadInput, "make_box: bad widths");
  HPolytope h;
  h.normals = Mat::Zero(2 * n, n);
  h.offsets.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    h.normals(2 * i, i) = 1.0;
    h.offsets[2 * i] = half_widths[i];
    h.normals(2 * i + 1, i) = -1.0;
    h.offsets[2 * i + 1] = half_widths[i];
  }
  const int m = 1 << n;
  VPolytope v;
  v.vertices.resize(m, n);
  for (int mask = 0; mask < m; ++mask)
    for (int i = 0; i < n; ++i)
      v.vertices(mask, i) = (mask >> i & 1) ? half_widths[i] : -half_widths[i];
  return make_polytope_trusted(std::move(h), std::move(v), true);
}

inline Polytope make_cube(int n, double half_width) {
  return make_box(Vec::Constant(n, half_width));
}

inline Polytope make_cross_polytope(int n, double scale = 1.0) {
  VPolytope v;
  v.vertices = Mat::Zero(2 * n, n);
  for (int i = 0; i < n; ++i) {
    v.vertices(2 * i, i) = scale;
    v.vertices(2 * i + 1, i) = -scale;
  }
  const int m = 1 << n;
  HPolytope h;
  h.normals.resize(m, n);
  h.offsets.resize(m);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (int mask = 0; mask < m; ++mask) {
    for (int i = 0; i < n; ++i)
      h.normals(mask, i) = (mask >> i & 1) ? inv : -inv;
    h.offsets[mask] = scale * inv;
  }
  return make_polytope_trusted(std::move(h), std::move(v), true);
}

struct StandardBody {
  std::optional<Polytope> polytope;
  std::optional<BodyOracle> oracle;
};

// kind: cube_vol1 | cube_pm1 | cross_polytope | ball_B2 | ball_D_n | linf_ball
// (linf_ball takes the half-width as parameter).
inline StandardBody standard_body(const std::string& kind, int n, double param = 0.0) {
  StandardBody b;
  if (kind == "cube_vol1") {
    b.polytope = make_cube(n, 0.5);
  } else if (kind == "cube_pm1") {
    b.polytope = make_cube(n, 1.0);
  } else if (kind == "cross_polytope") {
    b.polytope = make_cross_polytope(n);
  } else if (kind == "ball_B2") {
    b.oracle = make_ball_oracle(n, 1.0);
  } else if (kind == "ball_D_n") {
    b.oracle = make_ball_oracle(n, unit_volume_ball_radius(n));
  } else if (kind == "linf_ball") {
    if (!(param > 0.0)) fail(ErrorCode::BadInput, "linf_ball: need s > 0");
    b.polytope = make_cube(n, param);
  } else {
    fail(ErrorCode::UnknownKind, "standard_body: unknown kind " + kind);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Interior point of a halfspace intersection (smoothed maximin; needs no
// feasible start, signals emptiness through the returned slack)
// ---------------------------------------------------------------------------

struct InteriorPoint {
  Vec point;
  double slack = 0.0;  // min_i (b_i - <a_i, point>)
};

inline InteriorPoint find_interior_point(const Mat& normals, const Vec& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  Vec y = Vec::Zero(n);
  auto min_slack = [&](const Vec& z) {
    double s = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) s = std::min(s, offsets[i] - normals.row(i).dot(z));
    return s;
  };
  double spread = 1.0;
  for (int i = 0; i < m; ++i) spread = std::max(spread, std::abs(offsets[i]));
  double tau = spread;
  for (int round = 0; round < 60 && tau > 1e-12 * spread; ++round, tau *= 0.5) {
    for (int it = 0; it < 50; ++it) {
      // Softmax weights of the most violated constraints.
      Vec g(m);
      double gmax = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        g[i] = (normals.row(i).dot(y) - offsets[i]) / tau;
        gmax = std::max(gmax, g[i]);
      }
      double z = 0.0;
      Vec p(m);
      for (int i = 0; i < m; ++i) {
        p[i] = std::exp(g[i] - gmax);
        z += p[i];
      }
      p /= z;
      Vec grad = normals.transpose() * p;
      Mat hess = Mat::Zero(n, n);
      for (int i = 0; i < m; ++i)
        hess += p[i] * normals.row(i).transpose() * normals.row(i);
      hess -= grad * grad.transpose();
      hess /= tau;
      hess += 1e-12 * Mat::Identity(n, n);
      Vec step = hess.ldlt().solve(-grad);
      if (!step.allFinite()) break;
      // Backtrack on the smoothed objective.
      auto smoothed = [&](const Vec& w) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
          worst = std::max(worst, (normals.row(i).dot(w) - offsets[i]) / tau);
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
          acc += std::exp((normals.row(i).dot(w) - offsets[i]) / tau - worst);
        return tau * (worst + std::log(acc));
      };
      const double f0 = smoothed(y);
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
        Vec cand = y + alpha * step;
        if (smoothed(cand) < f0 - 1e-12 * std::abs(f0)) {
          y = cand;
          moved = true;
          break;
        }
      }
      if (!moved || step.norm() * std::max(1.0, alpha) < 1e-14 * spread) break;
    }
  }
  return {y, min_slack(y)};
}

}  // namespace cvx

#endif  // CVX_POLYTOPE_HPP
