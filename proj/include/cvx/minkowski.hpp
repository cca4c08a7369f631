// Discrete Minkowski problem: reconstruct a polytope from a prescribed
// surface-area measure. Also Blaschke averaging of measures, spherical
// discretization of ball measures, curvature-image measures, and the
// direct planar reconstruction.
#ifndef CVX_MINKOWSKI_HPP
#define CVX_MINKOWSKI_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/engines.hpp"
#include "cvx/measures.hpp"
#include "cvx/polytope.hpp"
#include "cvx/sphere_grid.hpp"

namespace cvx {

struct MinkowskiSolution {
  Polytope polytope;
  DiscreteSurfaceMeasure achieved;   // facet areas in input-atom order (0 if dropped)
  double residual = 0.0;             // max relative weight error on survivors
  std::vector<int> dropped_atoms;
  int iterations = 0;
  double objective = 0.0;            // sum w_i h_i / V^{1/n} at the last iterate
};

struct MinkowskiOptions {
  double tol = 1e-4;
  int max_iterations = 4000;
  double drop_threshold = 1e-12;  // relative to total facet area
  Vec initial_h;                  // optional; defaults to all ones
  std::vector<std::pair<double, double>>* trace = nullptr;  // (objective, residual)
};

namespace mkdetail {

struct Eval {
  double volume = 0.0;
  Vec areas;
  std::vector<Vec> vertices;
};

// Volume, facet areas and vertices of P(h); fast path with robust fallback.
inline Eval evaluate(const Mat& normals, const Vec& h) {
  Eval e;
  FacetAreas fa = facet_areas_fast(normals, h);
  if (fa.simple) {
    e.volume = fa.volume;
    e.areas = fa.areas;
    e.vertices = std::move(fa.vertices);
    return e;
  }
  HPolytope hp{normals, h};
  const Polytope p = make_polytope(hp);
  e.volume = volume_exact(p);
  e.areas = Vec::Zero(normals.rows());
  for (int f = 0; f < p.facet_count(); ++f) {
    // Match canonical facets back to input atoms by direction.
    int best = -1;
    double bd = 1e9;
    for (int i = 0; i < normals.rows(); ++i) {
      const double d = (p.normal(f) - normals.row(i).transpose()).norm();
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    if (bd <= 1e-7) e.areas[best] += facet_area(p, f);
  }
  e.vertices.reserve(p.vertex_count());
  for (int i = 0; i < p.vertex_count(); ++i) e.vertices.push_back(p.vertex(i));
  return e;
}

}  // namespace mkdetail

// Minimizes  sum_i w_i h_i / V(P(h))^{1/n}  by preconditioned projected
// descent with the exact gradient dV/dh_i = area_i, then rescales so the
// achieved facet areas match the target weights.
inline MinkowskiSolution solve_minkowski(const DiscreteSurfaceMeasure& mu,
                                         const MinkowskiOptions& opts = {}) {
  const int n = mu.dim();
  const int m = mu.count();
  if (n < 2 || n > 6) fail(ErrorCode::BadInput, "solve_minkowski: need 2 <= n <= 6");
  if (m > 500) fail(ErrorCode::BadInput, "solve_minkowski: too many atoms");
  validate_measure(mu);

  Mat normals(m, n);
  Vec w(m);
  for (int i = 0; i < m; ++i) {
    normals.row(i) = mu.atoms[i].u.transpose();
    w[i] = mu.atoms[i].w;
  }

  // Positive spanning: the atom directions must strictly surround 0.
  {
    std::vector<Vec> dirs(m);
    for (int i = 0; i < m; ++i) dirs[i] = mu.atoms[i].u;
    bool spans = true;
    try {
      const HullResult hull = convex_hull(dirs);
      for (const HullFacet& f : hull.facets)
        if (f.offset <= 1e-9) spans = false;
    } catch (const GeomError&) {
      spans = false;
    }
    if (!spans)
      fail(ErrorCode::InfeasibleMeasure,
           "solve_minkowski: normals do not positively span");
  }

  Vec h = opts.initial_h.size() == m ? opts.initial_h : Vec::Ones(m);
  const double inv_n = 1.0 / n;

  mkdetail::Eval ev = mkdetail::evaluate(normals, h);
  auto project_support = [&](Vec& hh, const mkdetail::Eval& e) {
    for (int i = 0; i < m; ++i) {
      double s = -std::numeric_limits<double>::infinity();
      for (const Vec& v : e.vertices) s = std::max(s, normals.row(i).dot(v));
      hh[i] = s;
    }
  };
  project_support(h, ev);

  auto objective = [&](const Vec& hh, double vol) {
    return w.dot(hh) / std::pow(vol, inv_n);
  };

  double fval = objective(h, ev.volume);
  double residual = std::numeric_limits<double>::infinity();
  double step = 0.25;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const double total_area = ev.areas.sum();
    double wsum = 0.0, asum = 0.0;
    for (int i = 0; i < m; ++i)
      if (ev.areas[i] > opts.drop_threshold * total_area) {
        wsum += w[i];
        asum += ev.areas[i];
      }
    if (asum <= 0.0) fail(ErrorCode::AllFacetsDropped, "solve_minkowski: empty body");
    const double kappa = asum / wsum;
    residual = 0.0;
    for (int i = 0; i < m; ++i)
      if (ev.areas[i] > opts.drop_threshold * total_area)
        residual = std::max(residual, std::abs(ev.areas[i] / (kappa * w[i]) - 1.0));
    if (opts.trace) opts.trace->push_back({fval, residual});
    if (residual <= opts.tol) break;

    // Preconditioned descent direction, unit scale per atom.
    const double vpow = std::pow(ev.volume, inv_n);
    const double c = w.dot(h) / (n * ev.volume);
    Vec grad(m), dir(m);
    for (int i = 0; i < m; ++i) {
      grad[i] = (w[i] - c * ev.areas[i]) / vpow;
      dir[i] = -(1.0 - c * ev.areas[i] / w[i]);
    }
    const double slope = grad.dot(dir);
    if (slope >= 0.0) break;  // numerically stationary

    const double hmax = h.maxCoeff();
    bool accepted = false;
    double eta = std::min(1.0, step * 2.0);
    for (int bt = 0; bt < 50; ++bt, eta *= 0.5) {
      Vec hc = h + eta * dir;
      bool ok = true;
      for (int i = 0; i < m; ++i)
        if (hc[i] < 1e-6 * hmax) {
          hc[i] = 1e-6 * hmax;
        }
      mkdetail::Eval ec;
      try {
        ec = mkdetail::evaluate(normals, hc);
      } catch (const GeomError&) {
        ok = false;
      }
      if (!ok || !(ec.volume > 0.0)) continue;
      project_support(hc, ec);
      const double fc = objective(hc, ec.volume);
      if (fc <= fval + 1e-4 * eta * slope) {
        h = hc;
        ev = std::move(ec);
        fval = fc;
        step = eta;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // line search exhausted at the floor of resolution
  }
  if (residual > opts.tol)
    fail(ErrorCode::NoConvergence, "solve_minkowski: residual " +
                                       std::to_string(residual) + " above tolerance");

  // One global rescale: areas are homogeneous of degree n-1 in h.
  {
    const double total_area = ev.areas.sum();
    double wsum = 0.0, asum = 0.0;
    for (int i = 0; i < m; ++i)
      if (ev.areas[i] > opts.drop_threshold * total_area) {
        wsum += w[i];
        asum += ev.areas[i];
      }
    const double lambda = std::pow(wsum / asum, 1.0 / (n - 1));
    h *= lambda;
    ev = mkdetail::evaluate(normals, h);
  }

  MinkowskiSolution sol;
  sol.iterations = iter;
  sol.objective = fval;
  HPolytope hp{normals, h};
  sol.polytope = make_polytope(hp);
  const double total_area = ev.areas.sum();
  sol.achieved.atoms.reserve(m);
  double res = 0.0;
  for (int i = 0; i < m; ++i) {
    sol.achieved.atoms.push_back({mu.atoms[i].u, std::max(ev.areas[i], 0.0)});
    if (ev.areas[i] > opts.drop_threshold * total_area)
      res = std::max(res, std::abs(ev.areas[i] / w[i] - 1.0));
    else
      sol.dropped_atoms.push_back(i);
  }
  sol.residual = res;
  return sol;
}

// Direct planar reconstruction: order the normals by angle and chain the
// edge vectors. This is the unique solution (up to translation) in the
// plane and serves as an independent oracle for the variational solver.
inline Polytope reconstruct_polygon(const DiscreteSurfaceMeasure& mu) {
  if (mu.dim() != 2) fail(ErrorCode::BadInput, "reconstruct_polygon: planar only");
  validate_measure(mu);
  const int m = mu.count();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::atan2(mu.atoms[a].u[1], mu.atoms[a].u[0]) <
           std::atan2(mu.atoms[b].u[1], mu.atoms[b].u[0]);
  });
  std::vector<Vec> verts;
  Vec v = Vec::Zero(2);
  for (int idx : order) {
    verts.push_back(v);
    Vec t(2);
    t << -mu.atoms[idx].u[1], mu.atoms[idx].u[0];  // quarter turn
    v += mu.atoms[idx].w * t;
  }
  if (v.norm() > 1e-9 * mu.total_mass())
    fail(ErrorCode::InfeasibleMeasure, "reconstruct_polygon: edges do not close");
  Polytope p = make_polytope_from_points(verts);
  const Vec c = centroid(p);
  p.vrep.vertices.rowwise() -= c.transpose();
  p.hrep.offsets -= p.hrep.normals * c;
  return p;
}

// Atom-wise convex combination of two measures on the merged normal set.
inline DiscreteSurfaceMeasure blaschke_average(const DiscreteSurfaceMeasure& mu_K,
                                               const DiscreteSurfaceMeasure& mu_L,
                                               double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    fail(ErrorCode::BadInput, "blaschke_average: lambda outside [0,1]");
  DiscreteSurfaceMeasure out;
  for (const auto& a : mu_K.atoms)
    if (lambda > 0.0) out.atoms.push_back({a.u, lambda * a.w});
  for (const auto& a : mu_L.atoms) {
    if (1.0 - lambda <= 0.0) break;
    bool merged = false;
    for (auto& b : out.atoms)
      if ((b.u - a.u).norm() <= 1e-9) {
        b.w += (1.0 - lambda) * a.w;
        merged = true;
        break;
      }
    if (!merged) out.atoms.push_back({a.u, (1.0 - lambda) * a.w});
  }
  return out;
}

// Uniform measure of the sphere of a ball, discretized on an antipodal
// random grid: m atoms of equal weight S(ball)/m. radius_mode "unit" is the
// unit ball; "D_n" the ball of volume 1.
inline DiscreteSurfaceMeasure discretize_ball_measure(int n, int m, std::uint64_t seed,
                                                      const std::string& radius_mode) {
  if (m % 2 != 0 || m < 4 * n)
    fail(ErrorCode::BadInput, "discretize_ball_measure: need m even, m >= 4n");
  double radius = 1.0;
  if (radius_mode == "D_n")
    radius = unit_volume_ball_radius(n);
  else if (radius_mode != "unit")
    fail(ErrorCode::UnknownKind, "discretize_ball_measure: bad radius mode");
  const double total = n * unit_ball_volume(n) * std::pow(radius, n - 1);
  const SphereGrid grid = sphere_grid(n, m, seed);
  DiscreteSurfaceMeasure mu;
  mu.atoms.reserve(m);
  for (const Vec& u : grid.directions) mu.atoms.push_back({u, total / m});
  return mu;
}

// Curvature-image measure: density rho^{n+1}/(n+1) against the grid
// quadrature. Evenness of rho plus the antipodal grid centers it exactly.
inline DiscreteSurfaceMeasure curvature_image(const std::function<double(const Vec&)>& rho,
                                              const SphereGrid& grid) {
  DiscreteSurfaceMeasure mu;
  mu.atoms.reserve(grid.size());
  const int np1 = grid.n + 1;
  for (int j = 0; j < grid.size(); ++j) {
    const double r = rho(grid.directions[j]);
    if (!(r > 0.0))
      fail(ErrorCode::NonPositiveRadial, "curvature_image: radial must be positive");
    mu.atoms.push_back({grid.directions[j],
                        grid.weights[j] * std::pow(r, np1) / np1});
  }
  return mu;
}

inline DiscreteSurfaceMeasure curvature_image(const Polytope& k0, const SphereGrid& grid) {
  return curvature_image([&k0](const Vec& u) { return radial(k0, u); }, grid);
}

}  // namespace cvx

#endif  // CVX_MINKOWSKI_HPP
