#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "cvx/engines.hpp"
#include "cvx/polytope.hpp"
#include "cvx/random_bodies.hpp"
#include "cvx/rng.hpp"
#include "cvx/sphere_grid.hpp"

using namespace cvx;

namespace {

// Brute-force vertex enumeration in R^3: intersect every triple of facet
// planes and keep the feasible intersection points.
std::vector<Vec> brute_force_vertices_3d(const HPolytope& h, double tol = 1e-7) {
  const int m = h.count();
  std::vector<Vec> verts;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Mat a(3, 3);
        a.row(0) = h.normals.row(i);
        a.row(1) = h.normals.row(j);
        a.row(2) = h.normals.row(k);
        if (std::abs(a.determinant()) < 1e-9) continue;
        Vec b(3);
        b << h.offsets[i], h.offsets[j], h.offsets[k];
        Vec x = a.fullPivLu().solve(b);
        bool feasible = true;
        for (int f = 0; f < m && feasible; ++f)
          if (h.normals.row(f).dot(x) > h.offsets[f] + tol) feasible = false;
        if (!feasible) continue;
        bool dup = false;
        for (const Vec& v : verts)
          if ((v - x).norm() <= 1e-6) {
            dup = true;
            break;
          }
        if (!dup) verts.push_back(x);
      }
  return verts;
}

// Brute-force facet count in R^3: a plane through three points is a facet
// plane iff all other points lie (weakly) on one side.
int brute_force_facet_count_3d(const std::vector<Vec>& pts, double tol = 1e-9) {
  const int m = static_cast<int>(pts.size());
  std::vector<std::pair<Vec, double>> planes;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        const Vec e1 = pts[j] - pts[i], e2 = pts[k] - pts[i];
        Vec nrm(3);
        nrm << e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
            e1[0] * e2[1] - e1[1] * e2[0];
        if (nrm.norm() < 1e-10) continue;
        nrm /= nrm.norm();
        const double off = nrm.dot(pts[i]);
        int above = 0, below = 0;
        for (int f = 0; f < m; ++f) {
          const double d = nrm.dot(pts[f]) - off;
          if (d > tol) ++above;
          if (d < -tol) ++below;
        }
        if (above > 0 && below > 0) continue;
        Vec oriented = (above > 0) ? Vec(-nrm) : nrm;
        const double ooff = (above > 0) ? -off : off;
        bool dup = false;
        for (const auto& p : planes)
          if ((p.first - oriented).norm() <= 1e-7 && std::abs(p.second - ooff) <= 1e-7) {
            dup = true;
            break;
          }
        if (!dup) planes.push_back({oriented, ooff});
      }
  return static_cast<int>(planes.size());
}

bool same_vertex_sets(const Mat& a, const std::vector<Vec>& b, double tol) {
  if (a.rows() != static_cast<long>(b.size())) return false;
  for (int i = 0; i < a.rows(); ++i) {
    bool found = false;
    for (const Vec& v : b)
      if ((a.row(i).transpose() - v).norm() <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cube facet form to vertex form") {
  const Polytope cube = make_cube(3, 1.0);
  VPolytope v = hrep_to_vrep(cube.hrep);
  REQUIRE(v.count() == 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 3; ++j)
      REQUIRE(std::abs(std::abs(v.vertices(i, j)) - 1.0) < 1e-9);
}

TEST_CASE("cross-polytope facet form to vertex form") {
  for (int n : {2, 3, 4, 5}) {
    const Polytope cp = make_cross_polytope(n);
    VPolytope v = hrep_to_vrep(cp.hrep);
    REQUIRE(v.count() == 2 * n);
    for (int i = 0; i < v.count(); ++i) {
      Vec x = v.vertices.row(i).transpose();
      int nonzero = 0;
      for (int j = 0; j < n; ++j)
        if (std::abs(x[j]) > 1e-9) ++nonzero;
      REQUIRE(nonzero == 1);
      REQUIRE(std::abs(x.lpNorm<Eigen::Infinity>() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("random 3d vertex enumeration vs plane-triple brute force") {
  Rng rng(20240901);
  for (int trial = 0; trial < 5; ++trial) {
    Rng r = rng.split(trial);
    HPolytope h;
    h.normals.resize(20, 3);
    h.offsets = Vec::Ones(20);
    for (int i = 0; i < 20; ++i) h.normals.row(i) = r.unit_vector(3).transpose();
    VPolytope v = hrep_to_vrep(h);
    const std::vector<Vec> oracle = brute_force_vertices_3d(h);
    INFO("trial " << trial << ": got " << v.count() << " vs oracle " << oracle.size());
    REQUIRE(same_vertex_sets(v.vertices, oracle, 1e-6));
  }
}

TEST_CASE("cube vertices to facet form") {
  const Polytope cube = make_cube(3, 1.0);
  HPolytope h = vrep_to_hrep(cube.vrep);
  REQUIRE(h.count() == 6);
  for (int f = 0; f < 6; ++f) {
    REQUIRE(std::abs(h.offsets[f] - 1.0) < 1e-9);
    REQUIRE(std::abs(h.normals.row(f).lpNorm<Eigen::Infinity>() - 1.0) < 1e-9);
  }
}

TEST_CASE("cross-polytope vertices to facet form") {
  VPolytope v;
  v.vertices = Mat::Zero(6, 3);
  for (int i = 0; i < 3; ++i) {
    v.vertices(2 * i, i) = 1.0;
    v.vertices(2 * i + 1, i) = -1.0;
  }
  HPolytope h = vrep_to_hrep(v);
  REQUIRE(h.count() == 8);
  const double inv = 1.0 / std::sqrt(3.0);
  for (int f = 0; f < 8; ++f) {
    REQUIRE(std::abs(h.offsets[f] - inv) < 1e-9);
    for (int j = 0; j < 3; ++j)
      REQUIRE(std::abs(std::abs(h.normals(f, j)) - inv) < 1e-9);
  }
}

TEST_CASE("random sphere points facet count vs brute force") {
  Rng rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    Rng r = rng.split(trial);
    std::vector<Vec> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(r.unit_vector(3));
    VPolytope v;
    v.vertices.resize(30, 3);
    for (int i = 0; i < 30; ++i) v.vertices.row(i) = pts[i].transpose();
    HPolytope h = vrep_to_hrep(v);
    REQUIRE(h.count() == brute_force_facet_count_3d(pts));
  }
}

TEST_CASE("round trip: vertex form of facet form reproduces the body") {
  Rng rng(5150);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      Rng r = rng.split(16 * n + trial);
      Polytope p = random_polytope(n, r);
      validate_polytope(p);
      HPolytope h2 = vrep_to_hrep(hrep_to_vrep(p.hrep));
      REQUIRE(h2.count() == p.facet_count());
      // Support-function agreement on facet normals both ways.
      Polytope q = make_polytope(h2);
      for (int f = 0; f < p.facet_count(); ++f) {
        const double hq = q.support(p.normal(f));
        REQUIRE(std::abs(hq - p.hrep.offsets[f]) < 1e-9);
      }
    }
  }
}

TEST_CASE("apply_map identity and axis scaling") {
  const Polytope cube = make_cube(3, 1.0);
  const Polytope same = apply_map(cube, identity_map(3));
  REQUIRE((same.vrep.vertices - cube.vrep.vertices).norm() == 0.0);
  REQUIRE((same.hrep.normals - cube.hrep.normals).norm() == 0.0);

  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 2.0, 1.0, 0.5;
  const Polytope box = apply_map(cube, make_linear_map(d));
  REQUIRE(std::abs(box.support(Vec::Unit(3, 0)) - 2.0) < 1e-12);
  REQUIRE(std::abs(box.support(Vec::Unit(3, 2)) - 0.5) < 1e-12);
  REQUIRE(std::abs(volume_exact(box) - 8.0) < 1e-9);  // det = 1
}

TEST_CASE("apply_map scales volume by |det| and composes") {
  Rng rng(31337);
  for (int trial = 0; trial < 6; ++trial) {
    Rng r = rng.split(trial);
    Polytope p = random_polytope(3, r);
    LinearMap t1 = random_gl(3, r);
    LinearMap t2 = random_gl(3, r);
    const Polytope p1 = apply_map(p, t1);
    const double v0 = volume_exact(p);
    const double v1 = volume_exact(p1);
    REQUIRE(std::abs(v1 - std::abs(t1.det) * v0) <= 1e-9 * std::max(1.0, v1));

    const Polytope a = apply_map(p1, t2);
    const Polytope b = apply_map(p, make_linear_map(t2.matrix * t1.matrix));
    REQUIRE((a.vrep.vertices - b.vrep.vertices).cwiseAbs().maxCoeff() < 1e-9 *
            std::max(1.0, a.circumradius()));
  }
}

TEST_CASE("apply_map rejects singular maps") {
  const Polytope cube = make_cube(2, 1.0);
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  REQUIRE_THROWS_AS(apply_map(cube, make_linear_map(m)), GeomError);
}

TEST_CASE("standard bodies") {
  const StandardBody c4 = standard_body("cube_vol1", 4);
  REQUIRE(c4.polytope.has_value());
  REQUIRE(std::abs(volume_exact(*c4.polytope) - 1.0) < 1e-12);

  const StandardBody d3 = standard_body("ball_D_n", 3);
  REQUIRE(d3.oracle.has_value());
  const double r_expected = std::pow(4.0 * M_PI / 3.0, -1.0 / 3.0);
  REQUIRE(std::abs(d3.oracle->radial(Vec::Unit(3, 0)) - r_expected) < 1e-12);
  REQUIRE(std::abs(d3.oracle->volume - 1.0) < 1e-12);

  const StandardBody sq = standard_body("linf_ball", 2, 0.5);
  REQUIRE(sq.polytope.has_value());
  REQUIRE(std::abs(sq.polytope->support(Vec::Unit(2, 0)) - 0.5) < 1e-12);

  REQUIRE_THROWS_AS(standard_body("donut", 3), GeomError);
}

TEST_CASE("sphere grid weights and moments") {
  const SphereGrid g2 = sphere_grid(2, 4, 1);
  REQUIRE(std::abs(g2.weight_sum() - 2.0 * M_PI) < 1e-12);

  const SphereGrid g3 = sphere_grid(3, 1000, 2);
  REQUIRE(std::abs(g3.weight_sum() - 4.0 * M_PI) < 1e-9);
  const double one = g3.integrate([](const Vec&) { return 1.0; });
  REQUIRE(std::abs(one - 4.0 * M_PI) < 1e-9);

  const SphereGrid g = sphere_grid(3, 5000, 3);
  const double m2 = g.integrate([](const Vec& u) { return u[0] * u[0]; });
  REQUIRE(std::abs(m2 - 4.0 * M_PI / 3.0) < 0.02 * 4.0 * M_PI / 3.0);
}

TEST_CASE("sphere grid antipodal cancellation of odd functions") {
  const SphereGrid g = sphere_grid(4, 800, 9);
  double maxf = 0.0;
  const double odd = g.integrate([&](const Vec& u) {
    const double f = u[0] * u[1] * u[2] + u[3];
    maxf = std::max(maxf, std::abs(f));
    return f;
  });
  REQUIRE(std::abs(odd) <= 1e-12 * g.weight_sum() * maxf);
}

TEST_CASE("symmetric polytopes have even support functions") {
  Rng rng(404);
  Polytope p = random_polytope(4, rng);
  REQUIRE(p.symmetric);
  const SphereGrid g = sphere_grid(4, 64, 5);
  for (const Vec& u : g.directions)
    REQUIRE(std::abs(p.support(u) - p.support(-u)) < 1e-12);
}

TEST_CASE("unbounded facet descriptions are rejected") {
  HPolytope h;  // a slab in R^3: normals do not positively span
  h.normals.resize(2, 3);
  h.normals << 0, 0, 1, 0, 0, -1;
  h.offsets = Vec::Ones(2);
  REQUIRE_THROWS_AS(hrep_to_vrep(h), GeomError);

  HPolytope open_box;  // five of six cube facets
  open_box.normals.resize(5, 3);
  open_box.normals << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1;
  open_box.offsets = Vec::Ones(5);
  REQUIRE_THROWS_AS(hrep_to_vrep(open_box), GeomError);
}

TEST_CASE("lower-dimensional point sets are rejected") {
  VPolytope flat;
  flat.vertices.resize(4, 3);
  flat.vertices << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0;  // all z = 0
  REQUIRE_THROWS_AS(vrep_to_hrep(flat), GeomError);
}
