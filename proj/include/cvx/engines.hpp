// Exact volume machinery: recursive facet-area computation (robust path,
// valid for degenerate bodies), a faster face-lattice engine for simple
// polytopes given in facet form (used by iterative solvers), and an exact
// boundary triangulation for moment integrals.
#ifndef CVX_ENGINES_HPP
#define CVX_ENGINES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/hull.hpp"
#include "cvx/polytope.hpp"

namespace cvx {

namespace engines {

// k-dimensional volume of the convex hull of a point set in R^k.
// Divergence recursion; exact up to floating point for convex inputs.
inline double point_set_volume(const std::vector<Vec>& pts, int k) {
  if (pts.empty()) return 0.0;
  if (k == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const Vec& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  if (k == 2) {
    // Convex position assumed: angular sort around the centroid + shoelace.
    Vec c = Vec::Zero(2);
    for (const Vec& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::atan2(pts[a][1] - c[1], pts[a][0] - c[0]) <
             std::atan2(pts[b][1] - c[1], pts[b][0] - c[0]);
    });
    double area = 0.0;
    for (size_t i = 0; i < order.size(); ++i) {
      const Vec& p = pts[order[i]];
      const Vec& q = pts[order[(i + 1) % order.size()]];
      area += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(area);
  }
  HullResult hull;
  try {
    hull = convex_hull(pts);
  } catch (const GeomError& e) {
    if (e.code() == ErrorCode::LowerDimensional) return 0.0;
    throw;
  }
  Vec c = Vec::Zero(k);
  for (const Vec& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double vol = 0.0;
  for (const HullFacet& f : hull.facets) {
    const double dist = f.offset - f.normal.dot(c);
    if (dist <= 0.0) continue;
    Mat basis = hyperplane_basis(f.normal);
    std::vector<Vec> proj;
    proj.reserve(f.points.size());
    const Vec& origin = pts[f.points.front()];
    for (int pi : f.points)
      proj.push_back(basis.transpose() * (pts[pi] - origin));
    vol += dist * point_set_volume(proj, k - 1);
  }
  return vol / k;
}

}  // namespace engines

// (n-1)-volume of one facet of a canonical polytope, computed by recursive
// triangulation within the facet hyperplane.
inline double facet_area(const Polytope& p, int f) {
  const int n = p.dim();
  const auto& sup = p.facet_vertices[f];
  if (static_cast<int>(sup.size()) < n)
    fail(ErrorCode::DegenerateFacet, "facet_area: too few supporting vertices");
  Mat basis = hyperplane_basis(p.normal(f));
  std::vector<Vec> proj;
  proj.reserve(sup.size());
  const Vec origin = p.vertex(sup.front());
  for (int vi : sup) proj.push_back(basis.transpose() * (p.vertex(vi) - origin));
  return engines::point_set_volume(proj, n - 1);
}

inline Vec all_facet_areas(const Polytope& p) {
  Vec a(p.facet_count());
  for (int f = 0; f < p.facet_count(); ++f) a[f] = facet_area(p, f);
  return a;
}

// Exact volume via the facet-pyramid identity V = (1/n) sum_i h_i area_i.
// Offsets are signed against the origin, so no interior assumption is made.
inline double volume_exact(const Polytope& p) {
  const int n = p.dim();
  if (n > 8) fail(ErrorCode::BadInput, "volume_exact: exact pipeline capped at n <= 8");
  if (n == 1) return p.hrep.offsets[0] + p.hrep.offsets[1];
  double v = 0.0;
  for (int f = 0; f < p.facet_count(); ++f)
    v += p.hrep.offsets[f] * facet_area(p, f);
  return v / n;
}

// ---------------------------------------------------------------------------
// Fast facet areas for simple polytopes in facet form
// ---------------------------------------------------------------------------

struct FacetAreas {
  Vec areas;                   // per input atom; 0 when the facet vanished
  double volume = 0.0;
  std::vector<Vec> vertices;   // deduplicated vertex coordinates
  std::vector<std::vector<int>> vertex_atoms;  // tight atoms per vertex
  bool simple = true;          // false: caller must use the robust path
};

namespace engines {

struct FaceKeyHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b9;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

}  // namespace engines

// All facet areas and the volume of P = {x : <a_i,x> <= b_i} with 0 in the
// interior, through the polar hull and a memoized walk down the face
// lattice. Exact for simple polytopes; flags simple=false otherwise.
inline FacetAreas facet_areas_fast(const Mat& normals, const Vec& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  FacetAreas out;
  out.areas = Vec::Zero(m);

  std::vector<Vec> polar(m);
  double pscale = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(offsets[i] > 0.0))
      fail(ErrorCode::OriginNotInterior, "facet_areas_fast: offsets must be positive");
    polar[i] = normals.row(i).transpose() / offsets[i];
    pscale = std::max(pscale, polar[i].norm());
  }
  HullResult hull = convex_hull(polar);

  // One polytope vertex per polar simplicial facet; deduplicate.
  double vscale = 0.0;
  std::vector<Vec> raw(hull.simplices.size());
  for (size_t s = 0; s < hull.simplices.size(); ++s) {
    const auto& sf = hull.simplices[s];
    if (sf.offset <= kGeomTol * pscale)
      fail(ErrorCode::Unbounded, "facet_areas_fast: unbounded body");
    raw[s] = sf.normal / sf.offset;
    vscale = std::max(vscale, raw[s].norm());
  }
  // Cluster coincident vertices: lexicographic sort, then a window scan on
  // the first coordinate.
  const double vtol = 1e-9 * std::max(1.0, vscale);
  std::vector<int> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int k = 0; k < n; ++k) {
      if (raw[a][k] < raw[b][k]) return true;
      if (raw[a][k] > raw[b][k]) return false;
    }
    return a < b;
  });
  std::vector<int> vid(raw.size(), -1);
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const int s = order[oi];
    for (size_t oj = oi; oj-- > 0;) {
      const int t = order[oj];
      if (raw[s][0] - raw[t][0] > vtol) break;
      if ((raw[s] - raw[t]).norm() <= vtol) {
        vid[s] = vid[t];
        break;
      }
    }
    if (vid[s] < 0) {
      vid[s] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(raw[s]);
    }
  }
  out.vertex_atoms.assign(out.vertices.size(), {});
  std::vector<std::vector<int>> vertex_simplices(out.vertices.size());
  for (size_t s = 0; s < hull.simplices.size(); ++s) {
    vertex_simplices[vid[s]].push_back(static_cast<int>(s));
    auto& atoms = out.vertex_atoms[vid[s]];
    atoms.insert(atoms.end(), hull.simplices[s].corners.begin(),
                 hull.simplices[s].corners.end());
  }
  for (auto& atoms : out.vertex_atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (static_cast<int>(atoms.size()) > n) out.simple = false;
  }
  if (!out.simple) return out;

  // Average coincident vertex coordinates for conditioning.
  {
    std::vector<Vec> acc(out.vertices.size(), Vec::Zero(n));
    std::vector<int> cnt(out.vertices.size(), 0);
    for (size_t s = 0; s < raw.size(); ++s) {
      acc[vid[s]] += raw[s];
      ++cnt[vid[s]];
    }
    for (size_t v = 0; v < out.vertices.size(); ++v) out.vertices[v] = acc[v] / cnt[v];
  }

  struct Face {
    std::vector<int> verts;
    double volume = 0.0;
  };
  std::unordered_map<std::vector<int>, double, engines::FaceKeyHash> memo;

  // Face F_S for a sorted atom tuple S, carried as the vertex ids incident
  // to all atoms of S. Recursion: vol_k = (1/k) sum_j dist_j * vol_{k-1}.
  std::function<double(const std::vector<int>&, const std::vector<int>&)> face_vol =
      [&](const std::vector<int>& S, const std::vector<int>& vset) -> double {
    auto it = memo.find(S);
    if (it != memo.end()) return it->second;
    const int k = n - static_cast<int>(S.size());
    double vol;
    if (k == 0) {
      vol = 1.0;
    } else {
      Vec p = Vec::Zero(n);
      for (int v : vset) p += out.vertices[v];
      p /= static_cast<double>(vset.size());
      // Orthonormal frame of span{a_s : s in S}.
      Mat q(n, S.size());
      int qc = 0;
      for (int s : S) {
        Vec a = normals.row(s).transpose();
        for (int c = 0; c < qc; ++c) a -= q.col(c).dot(a) * q.col(c);
        const double nn = a.norm();
        if (nn < 1e-9) {
          out.simple = false;
          return 0.0;
        }
        q.col(qc++) = a / nn;
      }
      // Candidate subface atoms: tight atoms of the face's vertices.
      std::vector<int> cands;
      for (int v : vset)
        for (int a : out.vertex_atoms[v])
          if (!std::binary_search(S.begin(), S.end(), a)) cands.push_back(a);
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      vol = 0.0;
      for (int j : cands) {
        std::vector<int> sub;
        for (int v : vset)
          if (std::binary_search(out.vertex_atoms[v].begin(),
                                 out.vertex_atoms[v].end(), j))
            sub.push_back(v);
        if (sub.empty()) continue;
        Vec aj = normals.row(j).transpose();
        Vec in_flat = aj - q * (q.transpose() * aj);
        const double denom = in_flat.norm();
        if (denom < 1e-9) {
          out.simple = false;
          return 0.0;
        }
        const double dist = (offsets[j] - aj.dot(p)) / denom;
        std::vector<int> S2 = S;
        S2.insert(std::lower_bound(S2.begin(), S2.end(), j), j);
        vol += std::max(0.0, dist) * face_vol(S2, sub);
        if (!out.simple) return 0.0;
      }
      vol /= k;
    }
    memo.emplace(S, vol);
    return vol;
  };

  std::vector<int> all_verts(out.vertices.size());
  std::iota(all_verts.begin(), all_verts.end(), 0);
  out.volume = face_vol({}, all_verts);
  if (!out.simple) return out;
  for (int i = 0; i < m; ++i) {
    std::vector<int> vs;
    for (size_t v = 0; v < out.vertices.size(); ++v)
      if (std::binary_search(out.vertex_atoms[v].begin(),
                             out.vertex_atoms[v].end(), i))
        vs.push_back(static_cast<int>(v));
    if (static_cast<int>(vs.size()) >= n) out.areas[i] = face_vol({i}, vs);
    if (!out.simple) return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact boundary triangulation and second moments
// ---------------------------------------------------------------------------

namespace engines {

// Triangulation of a k-dimensional convex point set (indices into pts).
inline std::vector<std::vector<int>> triangulate_points(const std::vector<Vec>& pts,
                                                        int k) {
  std::vector<std::vector<int>> tris;
  if (k == 1) {
    int lo = 0, hi = 0;
    for (size_t i = 1; i < pts.size(); ++i) {
      if (pts[i][0] < pts[lo][0]) lo = static_cast<int>(i);
      if (pts[i][0] > pts[hi][0]) hi = static_cast<int>(i);
    }
    if (lo != hi) tris.push_back({lo, hi});
    return tris;
  }
  if (k == 2) {
    Vec c = Vec::Zero(2);
    for (const Vec& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::atan2(pts[a][1] - c[1], pts[a][0] - c[0]) <
             std::atan2(pts[b][1] - c[1], pts[b][0] - c[0]);
    });
    for (size_t i = 1; i + 1 < order.size(); ++i)
      tris.push_back({order[0], order[i], order[i + 1]});
    return tris;
  }
  HullResult hull = convex_hull(pts);
  const int apex = hull.vertices.front();
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, p.norm());
  for (const HullFacet& f : hull.facets) {
    if (std::abs(f.normal.dot(pts[apex]) - f.offset) <= kGeomTol * std::max(1.0, scale))
      continue;  // facet contains the apex
    Mat basis = hyperplane_basis(f.normal);
    std::vector<Vec> proj;
    proj.reserve(f.points.size());
    const Vec& origin = pts[f.points.front()];
    for (int pi : f.points) proj.push_back(basis.transpose() * (pts[pi] - origin));
    for (const auto& sub : triangulate_points(proj, k - 1)) {
      std::vector<int> tri = {apex};
      for (int local : sub) tri.push_back(f.points[local]);
      tris.push_back(std::move(tri));
    }
  }
  return tris;
}

}  // namespace engines

// Full-dimensional simplices triangulating P, each cone of a boundary
// simplex with the origin; columns of each matrix are the n non-origin
// vertices, and `signs` carries the facet orientation against the origin.
struct Triangulation {
  std::vector<Mat> simplices;
  std::vector<double> signs;
};

inline Triangulation triangulate(const Polytope& p) {
  const int n = p.dim();
  Triangulation out;
  for (int f = 0; f < p.facet_count(); ++f) {
    const auto& sup = p.facet_vertices[f];
    Mat basis = hyperplane_basis(p.normal(f));
    std::vector<Vec> proj;
    proj.reserve(sup.size());
    const Vec origin = p.vertex(sup.front());
    for (int vi : sup) proj.push_back(basis.transpose() * (p.vertex(vi) - origin));
    for (const auto& tri : engines::triangulate_points(proj, n - 1)) {
      Mat s(n, n);
      for (size_t c = 0; c < tri.size(); ++c) s.col(c) = p.vertex(sup[tri[c]]);
      out.simplices.push_back(std::move(s));
      out.signs.push_back(p.hrep.offsets[f] >= 0.0 ? 1.0 : -1.0);
    }
  }
  return out;
}

inline double volume_from_triangulation(const Polytope& p) {
  const Triangulation t = triangulate(p);
  double fact = 1.0;
  for (int i = 2; i <= p.dim(); ++i) fact *= i;
  double v = 0.0;
  for (size_t i = 0; i < t.simplices.size(); ++i)
    v += t.signs[i] * std::abs(t.simplices[i].determinant()) / fact;
  return v;
}

// Exact first moment \int_P x dx; divide by the volume for the centroid.
inline Vec first_moment(const Polytope& p) {
  const int n = p.dim();
  const Triangulation t = triangulate(p);
  double fact = 1.0;  // (n+1)!
  for (int i = 2; i <= n + 1; ++i) fact *= i;
  Vec m = Vec::Zero(n);
  for (size_t i = 0; i < t.simplices.size(); ++i)
    m += t.signs[i] * std::abs(t.simplices[i].determinant()) / fact *
         t.simplices[i].rowwise().sum();
  return m;
}

inline Vec centroid(const Polytope& p) {
  return first_moment(p) / volume_exact(p);
}

// Exact second moment matrix  C = \int_P x x^T dx  from closed-form simplex
// moments over the cone triangulation.
inline Mat second_moment_matrix(const Polytope& p) {
  const int n = p.dim();
  const Triangulation t = triangulate(p);
  double fact = 1.0;  // (n+2)!
  for (int i = 2; i <= n + 2; ++i) fact *= i;
  Mat c = Mat::Zero(n, n);
  for (size_t i = 0; i < t.simplices.size(); ++i) {
    const Mat& s = t.simplices[i];
    const Vec sum = s.rowwise().sum();
    const double w = t.signs[i] * std::abs(s.determinant()) / fact;
    c += w * (s * s.transpose() + sum * sum.transpose());
  }
  return c;
}

}  // namespace cvx

#endif  // CVX_ENGINES_HPP
