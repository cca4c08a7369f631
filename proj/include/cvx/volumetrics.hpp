// Sections and projections onto flats, Monte-Carlo volume estimation,
// the ball-cube truncation family (volumes, surface area, median scale),
// and the section/projection Fubini consistency check.
#ifndef CVX_VOLUMETRICS_HPP
#define CVX_VOLUMETRICS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/engines.hpp"
#include "cvx/measures.hpp"
#include "cvx/polytope.hpp"
#include "cvx/rng.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// Flats
// ---------------------------------------------------------------------------

struct Flat {
  Mat basis;   // n x k, orthonormal columns spanning the linear part H
  Vec offset;  // point in H^perp (zero for linear subspaces)

  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
  bool is_linear(double tol = kTightTol) const { return offset.norm() <= tol; }
  Vec embed(const Vec& y) const { return offset + basis * y; }
};

inline Flat make_flat(const Mat& spanning, const Vec& offset) {
  Eigen::HouseholderQR<Mat> qr(spanning);
  Mat q = qr.householderQ();
  const int k = static_cast<int>(spanning.cols());
  Flat f;
  f.basis = q.leftCols(k);
  // Orthogonality sanity: spanning set must have full column rank.
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int i = 0; i < k; ++i)
    if (std::abs(r(i, i)) < 1e-12)
      fail(ErrorCode::BadInput, "make_flat: rank-deficient spanning set");
  f.offset = offset - f.basis * (f.basis.transpose() * offset);
  return f;
}

inline Flat linear_flat(const Mat& spanning) {
  return make_flat(spanning, Vec::Zero(spanning.rows()));
}

inline Flat coordinate_flat(int n, const std::vector<int>& axes) {
  Mat b = Mat::Zero(n, axes.size());
  for (size_t j = 0; j < axes.size(); ++j) b(axes[j], j) = 1.0;
  return {b, Vec::Zero(n)};
}

// The hyperplane u^perp (through the origin or shifted by t*u).
inline Flat perp_flat(const Vec& u, double t = 0.0) {
  Flat f;
  f.basis = hyperplane_basis(u / u.norm());
  f.offset = t * u / u.norm();
  return f;
}

inline Flat orthogonal_complement(const Flat& f) {
  const int n = f.ambient_dim();
  const int k = f.dim();
  Eigen::HouseholderQR<Mat> qr(f.basis);
  Mat q = qr.householderQ();
  Flat g;
  g.basis = q.rightCols(n - k);
  g.offset = Vec::Zero(n);
  return g;
}

inline Flat random_linear_flat(int n, int k, Rng& rng) {
  Mat m(n, k);
  for (int j = 0; j < k; ++j) m.col(j) = rng.normal_vec(n);
  return linear_flat(m);
}

// ---------------------------------------------------------------------------
// Exact sections and projections
// ---------------------------------------------------------------------------

// P intersected with a flat, expressed in the flat's orthonormal
// coordinates as a full-dimensional polytope of dimension flat.dim().
inline Polytope section(const Polytope& p, const Flat& flat) {
  const int n = p.dim();
  const int k = flat.dim();
  if (flat.ambient_dim() != n) fail(ErrorCode::GridMismatch, "section: dim mismatch");
  const double scale = std::max(1.0, p.circumradius());

  Mat normals(p.facet_count(), k);
  Vec offsets(p.facet_count());
  int rows = 0;
  for (int f = 0; f < p.facet_count(); ++f) {
    const Vec a = p.normal(f);
    Vec ar = flat.basis.transpose() * a;
    const double br = p.hrep.offsets[f] - a.dot(flat.offset);
    const double nn = ar.norm();
    if (nn <= 1e-12) {
      if (br < -kGeomTol * scale)
        fail(ErrorCode::EmptySection, "section: flat misses the body");
      continue;  // constraint holds on the whole flat
    }
    normals.row(rows) = (ar / nn).transpose();
    offsets[rows] = br / nn;
    ++rows;
  }
  normals.conservativeResize(rows, k);
  offsets.conservativeResize(rows);

  // Merge near-parallel restrictions, keeping the tightest offset.
  std::vector<int> keep;
  for (int i = 0; i < rows; ++i) {
    bool dup = false;
    for (int j : keep)
      if ((normals.row(i) - normals.row(j)).norm() <= 1e-9) {
        offsets[j] = std::min(offsets[j], offsets[i]);
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  Mat nk(keep.size(), k);
  Vec ok(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    nk.row(i) = normals.row(keep[i]);
    ok[i] = offsets[keep[i]];
  }

  InteriorPoint ip = find_interior_point(nk, ok);
  if (ip.slack <= kGeomTol * scale)
    fail(ErrorCode::EmptySection, "section: flat does not meet the interior");

  HPolytope h;
  h.normals = nk;
  h.offsets = ok - nk * ip.point;
  VPolytope v = hrep_to_vrep(h);
  v.vertices.rowwise() += ip.point.transpose();
  return make_polytope(v);
}

// Orthogonal projection onto a linear flat, in flat coordinates.
// Dimension-1 flats yield an interval (a 1-dimensional polytope).
inline Polytope project(const Polytope& p, const Flat& flat) {
  if (!flat.is_linear(1e-12))
    fail(ErrorCode::BadInput, "project: flat must be linear");
  const int k = flat.dim();
  Mat proj = p.vrep.vertices * flat.basis;  // rows = projected vertices
  if (k == 1) {
    const double lo = proj.col(0).minCoeff();
    const double hi = proj.col(0).maxCoeff();
    Polytope q;
    q.hrep.normals = Mat(2, 1);
    q.hrep.normals << 1.0, -1.0;
    q.hrep.offsets = Vec(2);
    q.hrep.offsets << hi, -lo;
    q.vrep.vertices = Mat(2, 1);
    q.vrep.vertices << lo, hi;
    q.facet_vertices = {{1}, {0}};
    q.symmetric = std::abs(lo + hi) <= kGeomTol * std::max(1.0, std::abs(hi));
    return q;
  }
  std::vector<Vec> pts;
  pts.reserve(proj.rows());
  for (int i = 0; i < proj.rows(); ++i) pts.push_back(proj.row(i).transpose());
  return make_polytope_from_points(pts);
}

// ---------------------------------------------------------------------------
// Monte Carlo volume
// ---------------------------------------------------------------------------

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

inline MCEstimate mc_volume(const std::function<bool(const Vec&)>& member,
                            const Vec& box_lo, const Vec& box_hi, long samples,
                            std::uint64_t seed) {
  if (samples < 1000) fail(ErrorCode::BadInput, "mc_volume: need >= 1e3 samples");
  const int n = static_cast<int>(box_lo.size());
  double box_vol = 1.0;
  for (int i = 0; i < n; ++i) box_vol *= box_hi[i] - box_lo[i];
  Rng rng(seed, 0xacc01adeULL);
  long hits = 0;
  Vec x(n);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(box_lo[i], box_hi[i]);
    if (member(x)) ++hits;
  }
  const double p = static_cast<double>(hits) / samples;
  MCEstimate e;
  e.value = p * box_vol;
  e.std_error = box_vol * std::sqrt(std::max(0.0, p * (1.0 - p) / samples));
  e.samples = samples;
  e.seed = seed;
  return e;
}

// ---------------------------------------------------------------------------
// Ball-cube truncations  D_n \cap s B_inf^n
// ---------------------------------------------------------------------------

// |D_n ∩ s B_inf^n|, estimated by uniform sampling inside D_n. |D_n| = 1,
// so the hit fraction is the volume.
inline MCEstimate ball_cube_volume(int n, double s, long samples, std::uint64_t seed) {
  if (!(s > 0.0)) fail(ErrorCode::BadInput, "ball_cube_volume: need s > 0");
  const double r = unit_volume_ball_radius(n);
  MCEstimate e;
  e.samples = samples;
  e.seed = seed;
  if (s >= r) {  // the cube contains the ball
    e.value = 1.0;
    e.std_error = 0.0;
    return e;
  }
  Rng rng(seed, 0xba11);
  long hits = 0;
  for (long k = 0; k < samples; ++k) {
    const Vec x = rng.point_in_ball(n, r);
    if (x.lpNorm<Eigen::Infinity>() <= s) ++hits;
  }
  const double p = static_cast<double>(hits) / samples;
  e.value = p;
  e.std_error = std::sqrt(std::max(0.0, p * (1.0 - p) / samples));
  return e;
}

struct S0Result {
  double s0 = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double volume_at_s0 = 0.0;
  int iterations = 0;
};

// The half-volume scale: |D_n ∩ s0 B_inf^n| = 1/2. Bisection over a single
// fixed sample set, so the empirical volume is monotone in s by
// construction and the run is deterministic per seed.
inline S0Result find_s0(int n, double vol_tol, long samples, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::BadInput, "find_s0: need n >= 2");
  const double r = unit_volume_ball_radius(n);
  Rng rng(seed, 0xba11);
  std::vector<double> tnorm(samples);
  for (long k = 0; k < samples; ++k)
    tnorm[k] = rng.point_in_ball(n, r).lpNorm<Eigen::Infinity>();
  auto vol = [&](double s) {
    long hits = 0;
    for (double t : tnorm)
      if (t <= s) ++hits;
    return static_cast<double>(hits) / samples;
  };
  S0Result res;
  res.bracket_lo = 0.0;
  res.bracket_hi = r;
  for (res.iterations = 1; res.iterations <= 60; ++res.iterations) {
    const double lo_v = vol(res.bracket_lo);
    const double hi_v = vol(res.bracket_hi);
    if (lo_v > hi_v + 1e-15)
      fail(ErrorCode::BadInput, "find_s0: volume not monotone on bracket");
    const double mid = 0.5 * (res.bracket_lo + res.bracket_hi);
    const double v = vol(mid);
    if (std::abs(v - 0.5) <= vol_tol) {
      res.s0 = mid;
      res.volume_at_s0 = v;
      return res;
    }
    if (v < 0.5)
      res.bracket_lo = mid;
    else
      res.bracket_hi = mid;
  }
  fail(ErrorCode::NoConvergence, "find_s0: bisection cap reached");
}

// Surface area of D_n ∩ s B_inf^n: spherical part (fraction of the sphere
// with ||x||_inf <= s) plus 2n cube-facet parts (fraction of each facet
// inside the ball), each estimated by Monte Carlo.
inline MCEstimate ball_cube_surface_area(int n, double s, long samples,
                                         std::uint64_t seed) {
  if (!(s > 0.0)) fail(ErrorCode::BadInput, "ball_cube_surface_area: need s > 0");
  const double r = unit_volume_ball_radius(n);
  const double sphere_total = n * unit_ball_volume(n) * std::pow(r, n - 1);  // S(D_n)
  MCEstimate e;
  e.samples = samples;
  e.seed = seed;
  if (s >= r) {
    e.value = sphere_total;  // = n * omega_n^{1/n}
    e.std_error = 0.0;
    return e;
  }
  Rng rng(seed, 0x5af2u);
  long hits = 0;
  for (long k = 0; k < samples; ++k) {
    const Vec u = rng.unit_vector(n);
    if (r * u.lpNorm<Eigen::Infinity>() <= s) ++hits;
  }
  const double p_sphere = static_cast<double>(hits) / samples;
  double value = sphere_total * p_sphere;
  double var = sphere_total * sphere_total * p_sphere * (1.0 - p_sphere) / samples;

  const double facet_full = std::pow(2.0 * s, n - 1);
  for (int axis = 0; axis < n; ++axis) {
    for (int sign = 0; sign < 2; ++sign) {
      Rng frng = rng.split(2 * axis + sign + 1);
      long in = 0;
      Vec x(n);
      for (long k = 0; k < samples; ++k) {
        x[axis] = sign ? s : -s;
        for (int i = 0; i < n; ++i)
          if (i != axis) x[i] = frng.uniform(-s, s);
        if (x.norm() <= r) ++in;
      }
      const double pf = static_cast<double>(in) / samples;
      value += facet_full * pf;
      var += facet_full * facet_full * pf * (1.0 - pf) / samples;
    }
  }
  e.value = value;
  e.std_error = std::sqrt(var);
  return e;
}

// ---------------------------------------------------------------------------
// Fubini consistency of sections and projections
// ---------------------------------------------------------------------------

struct FubiniReport {
  double lhs = 0.0;          // |K ∩ F| by the exact pipeline
  double rhs = 0.0;          // quadrature of fiber volumes over (K|H) ∩ G
  double polytope_gap = 0.0; // support mismatch of the two (k-1)-dim bodies
  bool pass = false;
};

namespace voldetail {

// Max facet violation of Q's facets by P's vertices; a Hausdorff-scale gap
// estimate for nearly identical convex bodies.
inline double support_gap(const Polytope& a, const Polytope& b) {
  double worst = 0.0;
  for (int i = 0; i < a.vertex_count(); ++i)
    for (int f = 0; f < b.facet_count(); ++f)
      worst = std::max(worst, b.hrep.normals.row(f).dot(a.vrep.vertices.row(i)) -
                                  b.hrep.offsets[f]);
  for (int i = 0; i < b.vertex_count(); ++i)
    for (int f = 0; f < a.facet_count(); ++f)
      worst = std::max(worst, a.hrep.normals.row(f).dot(b.vrep.vertices.row(i)) -
                                  a.hrep.offsets[f]);
  return worst;
}

// Composite Simpson over [lo, hi].
template <typename F>
double simpson(F&& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i)
    acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace voldetail

// Verifies, for G a codimension-1 subspace of H and F = span(G ∪ H^perp):
//  (a) (K ∩ F)|H = (K|H) ∩ G as polytopes in G coordinates;
//  (b) |K ∩ F| equals the integral of fiber volumes x -> |K ∩ (H^perp + x)|
//      over (K|H) ∩ G.
// The spanning set of G must consist of columns of H's basis-complement...
// G is passed as a flat whose basis columns lie inside span(H).
inline FubiniReport fubini_check(const Polytope& p, const Flat& H, const Flat& G,
                                 double vol_tol = 0.01, int quad_points = 256) {
  const int n = p.dim();
  const int k = H.dim();
  if (G.dim() != k - 1) fail(ErrorCode::BadInput, "fubini_check: G must be codim 1 in H");
  // Basis bookkeeping: split H into (G, g_last) and take F = (G, H^perp).
  Mat bg = G.basis;
  // Check G lies inside H.
  Mat resid = bg - H.basis * (H.basis.transpose() * bg);
  if (resid.norm() > 1e-9) fail(ErrorCode::BadInput, "fubini_check: G not inside H");
  // g_last: the direction of H orthogonal to G (largest basis residual).
  Mat hg(n, k);
  hg.leftCols(k - 1) = bg;
  Vec g_last;
  double best = -1.0;
  for (int c = 0; c < k; ++c) {
    Vec cand = H.basis.col(c);
    cand -= bg * (bg.transpose() * cand);
    if (cand.norm() > best) {
      best = cand.norm();
      g_last = cand;
    }
  }
  g_last /= g_last.norm();
  hg.col(k - 1) = g_last;

  const Flat Hperp = orthogonal_complement(H);
  Mat fb(n, (k - 1) + (n - k));
  fb.leftCols(k - 1) = bg;
  fb.rightCols(n - k) = Hperp.basis;
  const Flat F = linear_flat(fb);

  // Path 1: section then project. F-coordinates: first k-1 columns are G.
  const Polytope sec_F = section(p, F);
  Mat g_in_F = Mat::Zero(n - 1, k - 1);
  for (int j = 0; j < k - 1; ++j) g_in_F(j, j) = 1.0;
  const Polytope lhs_poly = project(sec_F, linear_flat(g_in_F));

  // Path 2: project then section. H-coordinates: first k-1 columns are G.
  Flat H_ordered;
  H_ordered.basis = hg;
  H_ordered.offset = Vec::Zero(n);
  const Polytope proj_H = project(p, H_ordered);
  Mat g_in_H = Mat::Zero(k, k - 1);
  for (int j = 0; j < k - 1; ++j) g_in_H(j, j) = 1.0;
  const Polytope rhs_poly = section(proj_H, linear_flat(g_in_H));

  FubiniReport rep;
  rep.polytope_gap = voldetail::support_gap(lhs_poly, rhs_poly);

  // Volume identity. Fiber volume at a point y of (K|H) ∩ G.
  auto fiber = [&](const Vec& y) -> double {
    Flat fiber_flat;
    fiber_flat.basis = Hperp.basis;
    fiber_flat.offset = bg * y;
    try {
      const Polytope s = section(p, fiber_flat);
      return volume_exact(s);
    } catch (const GeomError& e) {
      if (e.code() == ErrorCode::EmptySection) return 0.0;
      throw;
    }
  };

  rep.lhs = volume_exact(sec_F);
  if (k - 1 == 1) {
    const double a = rhs_poly.vrep.vertices.col(0).minCoeff();
    const double b = rhs_poly.vrep.vertices.col(0).maxCoeff();
    rep.rhs = voldetail::simpson(
        [&](double t) { return fiber(Vec::Constant(1, t)); }, a, b, quad_points);
  } else if (k - 1 == 2) {
    // Nested Simpson over the convex region: outer axis 0, inner axis 1.
    const double a = rhs_poly.vrep.vertices.col(0).minCoeff();
    const double b = rhs_poly.vrep.vertices.col(0).maxCoeff();
    const int outer = std::max(32, quad_points / 8);
    rep.rhs = voldetail::simpson(
        [&](double t) {
          // Inner interval: clip the polygon at x = t.
          double ylo = std::numeric_limits<double>::infinity();
          double yhi = -std::numeric_limits<double>::infinity();
          const auto& verts = rhs_poly.vrep.vertices;
          const int mv = rhs_poly.vertex_count();
          for (int i = 0; i < mv; ++i)
            for (int j = 0; j < mv; ++j) {
              const double x0 = verts(i, 0), x1 = verts(j, 0);
              if ((x0 - t) * (x1 - t) > 0 || std::abs(x1 - x0) < 1e-15) continue;
              const double lam = (t - x0) / (x1 - x0);
              const double y = verts(i, 1) + lam * (verts(j, 1) - verts(i, 1));
              ylo = std::min(ylo, y);
              yhi = std::max(yhi, y);
            }
          if (!(yhi > ylo)) return 0.0;
          return voldetail::simpson(
              [&](double u) {
                Vec y2(2);
                y2 << t, u;
                return fiber(y2);
              },
              ylo, yhi, 24);
        },
        a, b, outer);
  } else {
    fail(ErrorCode::BadInput, "fubini_check: quadrature supports dim(G) <= 2");
  }

  const double scale = std::max(1.0, p.circumradius());
  rep.pass = rep.polytope_gap <= 1e-8 * scale &&
             std::abs(rep.lhs - rep.rhs) <= vol_tol * std::max(rep.lhs, 1e-12);
  return rep;
}

}  // namespace cvx

#endif  // CVX_VOLUMETRICS_HPP
