#include <catch2/catch_amalgamated.hpp>

#include "cvx/minkowski.hpp"
#include "cvx/random_bodies.hpp"

using namespace cvx;

namespace {

Polytope centered_copy(const Polytope& p) {
  Polytope q = p;
  const Vec c = centroid(p);
  q.vrep.vertices.rowwise() -= c.transpose();
  q.hrep.offsets -= q.hrep.normals * c;
  return q;
}

// Support-number distance on the union of facet normals, after centering.
double support_distance(const Polytope& a, const Polytope& b) {
  const Polytope ac = centered_copy(a);
  const Polytope bc = centered_copy(b);
  double worst = 0.0;
  for (int f = 0; f < ac.facet_count(); ++f)
    worst = std::max(worst, std::abs(bc.support(ac.normal(f)) - ac.hrep.offsets[f]));
  for (int f = 0; f < bc.facet_count(); ++f)
    worst = std::max(worst, std::abs(ac.support(bc.normal(f)) - bc.hrep.offsets[f]));
  return worst;
}

}  // namespace

TEST_CASE("square from its edge measure") {
  DiscreteSurfaceMeasure mu;
  for (int i = 0; i < 2; ++i) {
    mu.atoms.push_back({Vec::Unit(2, i), 2.0});
    mu.atoms.push_back({-Vec::Unit(2, i), 2.0});
  }
  MinkowskiOptions opts;
  opts.tol = 1e-7;
  const MinkowskiSolution sol = solve_minkowski(mu, opts);
  REQUIRE(sol.residual <= 1e-6);
  REQUIRE(sol.dropped_atoms.empty());
  const Polytope oracle = reconstruct_polygon(mu);
  REQUIRE(support_distance(sol.polytope, oracle) <= 1e-6);
  REQUIRE(std::abs(volume_exact(sol.polytope) - 4.0) <= 1e-5);
}

TEST_CASE("cube from its facet measure") {
  DiscreteSurfaceMeasure mu;
  for (int i = 0; i < 3; ++i) {
    mu.atoms.push_back({Vec::Unit(3, i), 4.0});
    mu.atoms.push_back({-Vec::Unit(3, i), 4.0});
  }
  const MinkowskiSolution sol = solve_minkowski(mu);
  REQUIRE(sol.residual <= 1e-4);
  for (int i = 0; i < 6; ++i) {
    const Vec u = mu.atoms[i].u;
    REQUIRE(std::abs(sol.polytope.support(u) - 1.0) < 2e-4);
  }
}

TEST_CASE("round trip on random 3-polytopes") {
  Rng rng(24601);
  for (int trial = 0; trial < 6; ++trial) {
    Rng r = rng.split(trial);
    const Polytope p = random_polytope(3, r);
    const DiscreteSurfaceMeasure mu = surface_measure(p);
    const MinkowskiSolution sol = solve_minkowski(mu);
    REQUIRE(sol.residual <= 1e-4);
    REQUIRE(sol.dropped_atoms.empty());
    // Support numbers agree on all input normals, up to translation.
    const Polytope pc = centered_copy(p);
    const Polytope sc = centered_copy(sol.polytope);
    for (int f = 0; f < pc.facet_count(); ++f) {
      const double target = pc.hrep.offsets[f];
      const double got = sc.support(pc.normal(f));
      REQUIRE(std::abs(got - target) <= 1e-4 * std::abs(target));
    }
    // Volume carried along.
    REQUIRE(std::abs(volume_exact(sol.polytope) - volume_exact(p)) <=
            1e-4 * volume_exact(p) * 3);
  }
}

TEST_CASE("planar solver agrees with the direct reconstruction") {
  Rng rng(31415);
  for (int trial = 0; trial < 10; ++trial) {
    Rng r = rng.split(trial);
    const Polytope p = random_polytope(2, r, 8);
    const DiscreteSurfaceMeasure mu = surface_measure(p);
    MinkowskiOptions opts;
    opts.tol = 1e-7;
    const MinkowskiSolution sol = solve_minkowski(mu, opts);
    const Polytope oracle = reconstruct_polygon(mu);
    REQUIRE(support_distance(sol.polytope, oracle) <= 1e-6);
  }
}

TEST_CASE("uniqueness up to translation: runs from different starts agree") {
  Rng rng(8675309);
  const Polytope p = random_polytope(3, rng);
  const DiscreteSurfaceMeasure mu = surface_measure(p);
  const MinkowskiSolution a = solve_minkowski(mu);
  MinkowskiOptions opts;
  Vec h0 = Vec::Ones(mu.count());
  for (int i = 0; i < h0.size(); ++i) h0[i] = 1.0 + 0.4 * rng.uniform01();
  opts.initial_h = h0;
  const MinkowskiSolution b = solve_minkowski(mu, opts);
  REQUIRE(support_distance(a.polytope, b.polytope) <= 1e-4);
}

TEST_CASE("infeasible measures are rejected") {
  DiscreteSurfaceMeasure uncentered;
  uncentered.atoms = {{Vec::Unit(3, 0), 1.0},
                      {-Vec::Unit(3, 0), 2.0},
                      {Vec::Unit(3, 1), 1.0},
                      {-Vec::Unit(3, 1), 1.0},
                      {Vec::Unit(3, 2), 1.0},
                      {-Vec::Unit(3, 2), 1.0}};
  REQUIRE_THROWS_AS(solve_minkowski(uncentered), GeomError);

  DiscreteSurfaceMeasure planar_only;  // centered but spans only a plane
  planar_only.atoms = {{Vec::Unit(3, 0), 1.0},
                       {-Vec::Unit(3, 0), 1.0},
                       {Vec::Unit(3, 1), 1.0},
                       {-Vec::Unit(3, 1), 1.0}};
  REQUIRE_THROWS_AS(solve_minkowski(planar_only), GeomError);
}

TEST_CASE("blaschke average") {
  const auto mu_cube = surface_measure(make_cube(3, 1.0));
  const auto same = blaschke_average(mu_cube, mu_cube, 0.5);
  REQUIRE(same.count() == 6);
  for (const auto& a : same.atoms) REQUIRE(std::abs(a.w - 4.0) < 1e-12);

  const auto keep = blaschke_average(mu_cube, surface_measure(make_cube(3, 2.0)), 1.0);
  REQUIRE(keep.count() == 6);
  REQUIRE(std::abs(keep.total_mass() - 24.0) < 1e-12);

  const auto ball = discretize_ball_measure(3, 100, 5, "D_n");
  const auto mix = blaschke_average(mu_cube, ball, 0.5);
  const double expect = 0.5 * (24.0 + 3.0 * std::pow(unit_ball_volume(3), 1.0 / 3.0));
  REQUIRE(std::abs(mix.total_mass() - expect) < 1e-9);
  REQUIRE(mix.centering_residual() <= 1e-8 * mix.total_mass());
}

TEST_CASE("discretized ball measures") {
  const auto unit = discretize_ball_measure(3, 100, 7, "unit");
  REQUIRE(std::abs(unit.total_mass() - 4.0 * M_PI) < 1e-9);

  const auto d4 = discretize_ball_measure(4, 64, 7, "D_n");
  REQUIRE(std::abs(d4.total_mass() - 4.0 * std::pow(unit_ball_volume(4), 0.25)) < 1e-9);

  // Solving the discretized measure approximates the ball.
  const auto mu = discretize_ball_measure(3, 200, 11, "unit");
  const MinkowskiSolution sol = solve_minkowski(mu);
  const double vol = volume_exact(sol.polytope);
  REQUIRE(std::abs(vol - unit_ball_volume(3)) <= 0.05 * unit_ball_volume(3));
}

TEST_CASE("curvature image measures") {
  const SphereGrid grid = sphere_grid(3, 200, 13);
  // Constant radial: density 1/(n+1).
  const auto ball_ci = curvature_image([](const Vec&) { return 1.0; }, grid);
  for (int j = 0; j < grid.size(); ++j)
    REQUIRE(std::abs(ball_ci.atoms[j].w - grid.weights[j] / 4.0) < 1e-15);

  // Homogeneity: doubling the body multiplies weights by 2^{n+1}.
  const Polytope cube = make_cube(3, 1.0);
  const auto ci1 = curvature_image(cube, grid);
  const Polytope cube2 = make_cube(3, 2.0);
  const auto ci2 = curvature_image(cube2, grid);
  for (int j = 0; j < grid.size(); ++j)
    REQUIRE(std::abs(ci2.atoms[j].w - 16.0 * ci1.atoms[j].w) <=
            1e-12 * std::max(1.0, ci2.atoms[j].w));

  // Spot values of the cube's radial power: q/4 on an axis, 9q/4 on the
  // diagonal.
  Vec e1 = Vec::Unit(3, 0);
  Vec diag = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  const double q = grid.weights[0];
  const auto rho = [&cube](const Vec& u) { return radial(cube, u); };
  REQUIRE(std::abs(rho(e1) - 1.0) < 1e-12);
  REQUIRE(std::abs(std::pow(rho(e1), 4) / 4.0 - 0.25) < 1e-12);
  REQUIRE(std::abs(std::pow(rho(diag), 4) / 4.0 * q - 2.25 * q) < 1e-12);

  // Negative radial rejected.
  REQUIRE_THROWS_AS(curvature_image([](const Vec&) { return -1.0; }, grid), GeomError);

  // Round trip: the constant-density image solves to a near-ball.
  const auto mu = curvature_image([](const Vec&) { return 1.0; }, sphere_grid(3, 200, 17));
  const MinkowskiSolution sol = solve_minkowski(mu);
  const double r_expect = std::pow(1.0 / 4.0, 1.0 / 2.0);  // area density r^{n-1} = 1/(n+1)
  const double vol = volume_exact(sol.polytope);
  const double vol_expect = unit_ball_volume(3) * std::pow(r_expect, 3);
  REQUIRE(std::abs(vol - vol_expect) <= 0.05 * vol_expect);
}
