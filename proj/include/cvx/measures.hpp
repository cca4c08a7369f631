// Surface-area measures of polytopes and the calculus built on them:
// support functions, the Cauchy projection formula, mixed volumes
// V(K[n-1], L), isotropy diagnostics and atom-wise measure comparison.
#ifndef CVX_MEASURES_HPP
#define CVX_MEASURES_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "cvx/common.hpp"
#include "cvx/engines.hpp"
#include "cvx/polytope.hpp"

namespace cvx {

struct MeasureAtom {
  Vec u;       // unit direction
  double w;    // positive weight, units of (n-1)-volume
};

struct DiscreteSurfaceMeasure {
  std::vector<MeasureAtom> atoms;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms[0].u.size()); }
  int count() const { return static_cast<int>(atoms.size()); }

  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.w;
    return s;
  }

  // Norm of sum w_i u_i; zero for the boundary measure of a closed body.
  double centering_residual() const {
    if (atoms.empty()) return 0.0;
    Vec c = Vec::Zero(dim());
    for (const auto& a : atoms) c += a.w * a.u;
    return c.norm();
  }
};

inline void validate_measure(const DiscreteSurfaceMeasure& mu,
                             double center_tol = 1e-8) {
  for (const auto& a : mu.atoms) {
    if (!(a.w > 0.0)) fail(ErrorCode::BadInput, "measure: nonpositive weight");
    if (std::abs(a.u.norm() - 1.0) > 1e-10)
      fail(ErrorCode::BadInput, "measure: atom direction not unit");
  }
  for (size_t i = 0; i < mu.atoms.size(); ++i)
    for (size_t j = i + 1; j < mu.atoms.size(); ++j)
      if ((mu.atoms[i].u - mu.atoms[j].u).norm() <= 1e-9)
        fail(ErrorCode::BadInput, "measure: duplicate atom directions");
  if (mu.centering_residual() > center_tol * mu.total_mass())
    fail(ErrorCode::InfeasibleMeasure, "measure: not centered");
}

// Surface area measure of a polytope: one atom per facet, weight = exact
// facet (n-1)-volume.
inline DiscreteSurfaceMeasure surface_measure(const Polytope& p) {
  DiscreteSurfaceMeasure mu;
  mu.atoms.reserve(p.facet_count());
  for (int f = 0; f < p.facet_count(); ++f) {
    const double a = facet_area(p, f);
    if (!(a > 0.0)) fail(ErrorCode::DegenerateFacet, "surface_measure: flat facet");
    mu.atoms.push_back({p.normal(f), a});
  }
  return mu;
}

inline double surface_area(const Polytope& p) {
  return surface_measure(p).total_mass();
}

using SupportFn = std::function<double(const Vec&)>;

inline SupportFn support_of(const Polytope& p) {
  return [&p](const Vec& u) { return p.support(u); };
}

inline SupportFn support_of(const BodyOracle& b) { return b.support; }

// h_{Pi K}(u) = |K | u^perp| = (1/2) sum_i w_i |<u_i, u>|.
inline double projection_volume_cauchy(const DiscreteSurfaceMeasure& mu, const Vec& u) {
  double s = 0.0;
  for (const auto& a : mu.atoms) s += a.w * std::abs(a.u.dot(u));
  return 0.5 * s;
}

// V(K[n-1], L) = (1/n) sum_i h_L(u_i) w_i. With L = K this is |K|; with
// L = B_2^n it is S(K)/n.
inline double mixed_volume_n1(const DiscreteSurfaceMeasure& mu_K,
                              const SupportFn& h_L) {
  const int n = mu_K.dim();
  double s = 0.0;
  for (const auto& a : mu_K.atoms) s += h_L(a.u) * a.w;
  return s / n;
}

struct IsotropyReport {
  Mat moment_matrix;  // sum_i w_i u_i u_i^T
  double defect = 0.0;  // spectral distance from (S/n) I, relative
};

inline IsotropyReport isotropy_report(const DiscreteSurfaceMeasure& mu) {
  const int n = mu.dim();
  IsotropyReport r;
  r.moment_matrix = Mat::Zero(n, n);
  for (const auto& a : mu.atoms) r.moment_matrix += a.w * a.u * a.u.transpose();
  const double target = mu.total_mass() / n;
  Eigen::SelfAdjointEigenSolver<Mat> es(r.moment_matrix - target * Mat::Identity(n, n));
  r.defect = es.eigenvalues().cwiseAbs().maxCoeff() / target;
  return r;
}

struct MeasureComparison {
  bool dominated = false;  // w_K <= w_L atom-wise on the aligned grid
  double epsilon_min = 0.0;
  double epsilon_max = 0.0;
};

// Aligns atoms by angular matching (<= 1e-9), treating unmatched atoms as
// weight zero, and compares weights atom-wise.
inline MeasureComparison measure_compare(const DiscreteSurfaceMeasure& mu_K,
                                         const DiscreteSurfaceMeasure& mu_L) {
  struct Pair {
    double wk = 0.0, wl = 0.0;
  };
  std::vector<Vec> dirs;
  std::vector<Pair> pairs;
  auto slot = [&](const Vec& u) -> Pair& {
    for (size_t i = 0; i < dirs.size(); ++i)
      if ((dirs[i] - u).norm() <= 1e-9) return pairs[i];
    dirs.push_back(u);
    pairs.emplace_back();
    return pairs.back();
  };
  for (const auto& a : mu_K.atoms) slot(a.u).wk += a.w;
  for (const auto& a : mu_L.atoms) slot(a.u).wl += a.w;

  MeasureComparison r;
  r.dominated = true;
  r.epsilon_min = std::numeric_limits<double>::infinity();
  r.epsilon_max = -std::numeric_limits<double>::infinity();
  for (const Pair& p : pairs) {
    const double d = p.wl - p.wk;
    if (p.wk > p.wl + 1e-12) r.dominated = false;
    r.epsilon_min = std::min(r.epsilon_min, d);
    r.epsilon_max = std::max(r.epsilon_max, d);
  }
  if (pairs.empty()) r.epsilon_min = r.epsilon_max = 0.0;
  return r;
}

}  // namespace cvx

#endif  // CVX_MEASURES_HPP
