// Incremental convex hull in dimension 2..8 (quickhull with outside sets).
// Produces merged (non-simplicial) facets plus the underlying simplicial
// triangulation of the boundary. Deterministic: apex selection and facet
// processing order depend only on the input order.
#ifndef CVX_HULL_HPP
#define CVX_HULL_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "cvx/common.hpp"

namespace cvx {

struct HullFacet {
  Vec normal;               // unit outward normal
  double offset = 0.0;      // <normal, x> <= offset for all input points
  std::vector<int> points;  // input points lying on the facet plane
};

struct SimplicialFacet {
  std::vector<int> corners;  // n point indices, sorted
  Vec normal;                // unit outward
  double offset = 0.0;
};

struct HullResult {
  std::vector<HullFacet> facets;          // merged, irredundant
  std::vector<SimplicialFacet> simplices;  // boundary triangulation
  std::vector<int> vertices;               // extreme input points, sorted
  int dim = 0;
};

namespace hulldetail {

struct WorkFacet {
  std::vector<int> corners;    // sorted point indices, size n
  Vec normal;
  double offset = 0.0;
  std::vector<int> neighbors;  // neighbor facet id across ridge omitting corners[k]
  std::vector<int> outside;    // unassigned points strictly beyond this facet
  int far_point = -1;
  double far_dist = 0.0;
  bool alive = true;
};

// Unit normal of the hyperplane through n points; empty on rank deficiency.
inline bool plane_through(const std::vector<Vec>& pts,
                          const std::vector<int>& idx, Vec& normal,
                          double& offset) {
  const int n = static_cast<int>(pts[idx[0]].size());
  Mat edges(n - 1, n);
  for (int i = 1; i < n; ++i) edges.row(i - 1) = (pts[idx[i]] - pts[idx[0]]).transpose();
  Eigen::JacobiSVD<Mat> svd(edges, Eigen::ComputeFullV);
  normal = svd.matrixV().col(n - 1);
  const double nn = normal.norm();
  if (nn < 0.5) return false;
  normal /= nn;
  if (n > 1) {
    const double smin = svd.singularValues()(n - 2);
    const double smax = svd.singularValues()(0);
    if (smax <= 0.0 || smin <= 1e-12 * smax) return false;
  }
  offset = normal.dot(pts[idx[0]]);
  return true;
}

inline std::vector<int> ridge_of(const std::vector<int>& corners, int omit) {
  std::vector<int> r;
  r.reserve(corners.size() - 1);
  for (int c : corners)
    if (c != omit) r.push_back(c);
  return r;
}

}  // namespace hulldetail

// Convex hull of points. Throws LowerDimensional if the affine hull has
// rank < n. eps is an absolute tolerance applied after the caller's
// conditioning; points within eps of a facet plane count as lying on it.
inline HullResult convex_hull(const std::vector<Vec>& input, double eps = kGeomTol) {
  using namespace hulldetail;
  const int m = static_cast<int>(input.size());
  if (m == 0) fail(ErrorCode::BadInput, "convex_hull: no points");
  const int n = static_cast<int>(input[0].size());

  HullResult out;
  out.dim = n;

  if (n == 1) {
    int ilo = 0, ihi = 0;
    for (int i = 1; i < m; ++i) {
      if (input[i][0] < input[ilo][0]) ilo = i;
      if (input[i][0] > input[ihi][0]) ihi = i;
    }
    if (input[ihi][0] - input[ilo][0] <= eps)
      fail(ErrorCode::LowerDimensional, "convex_hull: 1D degenerate");
    for (int sgn : {+1, -1}) {
      HullFacet f;
      f.normal = Vec::Constant(1, sgn);
      f.offset = sgn > 0 ? input[ihi][0] : -input[ilo][0];
      for (int i = 0; i < m; ++i)
        if (std::abs(sgn * input[i][0] - f.offset) <= eps) f.points.push_back(i);
      out.facets.push_back(std::move(f));
    }
    out.vertices = {std::min(ilo, ihi), std::max(ilo, ihi)};
    if (ilo == ihi) out.vertices = {ilo};
    return out;
  }

  // Condition: center on the mean, scale by a power of two so the point
  // cloud has radius in [1,2). Normals are unchanged by this transform.
  Vec center = Vec::Zero(n);
  for (const Vec& p : input) center += p;
  center /= m;
  double radius = 0.0;
  for (const Vec& p : input) radius = std::max(radius, (p - center).norm());
  if (radius <= 0.0) fail(ErrorCode::LowerDimensional, "convex_hull: identical points");
  const double scale = pow2_rescale(radius);
  std::vector<Vec> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = (input[i] - center) * scale;

  // Initial simplex: greedy farthest-point with orthogonalization.
  std::vector<int> init;
  {
    int p0 = 0;
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
      const double d = pts[i].norm();
      if (d > best + kTightTol) {
        best = d;
        p0 = i;
      }
    }
    init.push_back(p0);
    Mat basis(n, 0);
    while (static_cast<int>(init.size()) < n + 1) {
      int pick = -1;
      double far = eps;
      for (int i = 0; i < m; ++i) {
        Vec d = pts[i] - pts[init[0]];
        if (basis.cols() > 0) d -= basis * (basis.transpose() * d);
        const double r = d.norm();
        if (r > far + kTightTol) {
          far = r;
          pick = i;
        }
      }
      if (pick < 0)
        fail(ErrorCode::LowerDimensional, "convex_hull: affine rank deficient");
      Vec d = pts[pick] - pts[init[0]];
      if (basis.cols() > 0) d -= basis * (basis.transpose() * d);
      basis.conservativeResize(n, basis.cols() + 1);
      basis.col(basis.cols() - 1) = d / d.norm();
      init.push_back(pick);
    }
  }

  Vec interior = Vec::Zero(n);
  for (int i : init) interior += pts[i];
  interior /= static_cast<double>(init.size());

  std::vector<WorkFacet> facets;
  facets.reserve(4 * m);

  auto make_facet = [&](std::vector<int> corners) -> int {
    std::sort(corners.begin(), corners.end());
    WorkFacet f;
    f.corners = std::move(corners);
    if (!plane_through(pts, f.corners, f.normal, f.offset))
      fail(ErrorCode::DegenerateFacet, "convex_hull: degenerate facet");
    if (f.normal.dot(interior) > f.offset) {
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
    f.neighbors.assign(f.corners.size(), -1);
    facets.push_back(std::move(f));
    return static_cast<int>(facets.size()) - 1;
  };

  // Initial n+1 facets, each omitting one vertex of the simplex.
  std::vector<int> simplex_sorted = init;
  std::sort(simplex_sorted.begin(), simplex_sorted.end());
  for (int omit = 0; omit <= n; ++omit) {
    std::vector<int> corners;
    for (int k = 0; k <= n; ++k)
      if (k != omit) corners.push_back(simplex_sorted[k]);
    make_facet(corners);
  }
  // Wire initial adjacency: facets i and j share the ridge omitting both.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      // Neighbor of facet i across the ridge that omits simplex vertex j.
      const int omitted = simplex_sorted[j];
      for (size_t k = 0; k < facets[i].corners.size(); ++k)
        if (facets[i].corners[k] == omitted) facets[i].neighbors[k] = j;
    }

  auto assign_point = [&](int p, const std::vector<int>& candidates) {
    for (int fi : candidates) {
      WorkFacet& f = facets[fi];
      if (!f.alive) continue;
      const double d = f.normal.dot(pts[p]) - f.offset;
      if (d > eps) {
        f.outside.push_back(p);
        if (d > f.far_dist + kTightTol) {
          f.far_dist = d;
          f.far_point = p;
        }
        return;
      }
    }
  };

  {
    std::vector<int> all(facets.size());
    for (size_t i = 0; i < facets.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<bool> used(m, false);
    for (int i : init) used[i] = true;
    for (int p = 0; p < m; ++p)
      if (!used[p]) assign_point(p, all);
  }

  // Main loop: process the lowest-id live facet with outside points.
  size_t cursor = 0;
  while (true) {
    while (cursor < facets.size() &&
           (!facets[cursor].alive || facets[cursor].outside.empty()))
      ++cursor;
    if (cursor >= facets.size()) break;
    const int start = static_cast<int>(cursor);
    const int apex = facets[start].far_point;

    // Visible region (BFS over neighbors).
    std::vector<int> visible;
    std::vector<int> stack = {start};
    std::vector<char> seen(facets.size(), 0);
    seen[start] = 1;
    while (!stack.empty()) {
      const int fi = stack.back();
      stack.pop_back();
      visible.push_back(fi);
      for (int nb : facets[fi].neighbors) {
        if (nb < 0 || seen[nb] || !facets[nb].alive) continue;
        seen[nb] = 1;
        if (facets[nb].normal.dot(pts[apex]) - facets[nb].offset > eps)
          stack.push_back(nb);
        else
          seen[nb] = 0;  // horizon neighbor, may be re-tested from other facets
      }
    }
    std::sort(visible.begin(), visible.end());

    // Horizon ridges: (visible facet, ridge, outside neighbor).
    struct Horizon {
      std::vector<int> ridge;
      int outside_facet;
    };
    std::vector<Horizon> horizon;
    for (int fi : visible) {
      const WorkFacet& f = facets[fi];
      for (size_t k = 0; k < f.corners.size(); ++k) {
        const int nb = f.neighbors[k];
        const bool nb_visible =
            nb >= 0 && facets[nb].alive &&
            facets[nb].normal.dot(pts[apex]) - facets[nb].offset > eps;
        if (!nb_visible)
          horizon.push_back({ridge_of(f.corners, f.corners[k]), nb});
      }
    }

    std::vector<int> orphan;
    for (int fi : visible) {
      WorkFacet& f = facets[fi];
      f.alive = false;
      for (int p : f.outside)
        if (p != apex) orphan.push_back(p);
      f.outside.clear();
    }

    // New cone facets.
    std::map<std::vector<int>, std::pair<int, int>> ridge_map;  // ridge -> (facet, slot)
    std::vector<int> created;
    for (const Horizon& h : horizon) {
      std::vector<int> corners = h.ridge;
      corners.push_back(apex);
      const int nf = make_facet(corners);
      created.push_back(nf);
      WorkFacet& f = facets[nf];
      // Slot of the ridge shared with the pre-existing outside facet: the
      // ridge omits apex.
      for (size_t k = 0; k < f.corners.size(); ++k) {
        if (f.corners[k] == apex) {
          f.neighbors[k] = h.outside_facet;
          if (h.outside_facet >= 0) {
            WorkFacet& g = facets[h.outside_facet];
            std::vector<int> r = ridge_of(f.corners, apex);
            for (size_t j = 0; j < g.corners.size(); ++j)
              if (ridge_of(g.corners, g.corners[j]) == r) g.neighbors[j] = nf;
          }
        } else {
          std::vector<int> r = ridge_of(f.corners, f.corners[k]);
          auto it = ridge_map.find(r);
          if (it == ridge_map.end()) {
            ridge_map.emplace(std::move(r), std::make_pair(nf, static_cast<int>(k)));
          } else {
            f.neighbors[k] = it->second.first;
            facets[it->second.first].neighbors[it->second.second] = nf;
          }
        }
      }
    }

    std::sort(orphan.begin(), orphan.end());
    orphan.erase(std::unique(orphan.begin(), orphan.end()), orphan.end());
    for (int p : orphan) assign_point(p, created);
    if (static_cast<size_t>(start) == cursor) ++cursor;
  }

  // Collect live simplicial facets; map back to the original frame.
  std::vector<int> vert_mark(m, 0);
  for (const WorkFacet& f : facets) {
    if (!f.alive) continue;
    SimplicialFacet s;
    s.corners = f.corners;
    s.normal = f.normal;
    s.offset = f.offset / scale + f.normal.dot(center);
    out.simplices.push_back(std::move(s));
    for (int c : f.corners) vert_mark[c] = 1;
  }
  for (int i = 0; i < m; ++i)
    if (vert_mark[i]) out.vertices.push_back(i);

  // Merge coplanar simplicial facets into true facets. Bucket by a rounded
  // key, then verify by angle and offset within the bucket chain.
  struct Group {
    Vec normal;
    double offset;
    std::vector<int> members;
  };
  std::vector<Group> groups;
  std::map<std::array<std::int64_t, 9>, std::vector<int>> buckets;
  const double q = 1e7;  // coarse quantization; exact duplicates collide
  for (size_t si = 0; si < out.simplices.size(); ++si) {
    const SimplicialFacet& s = out.simplices[si];
    std::array<std::int64_t, 9> key{};
    for (int k = 0; k < n; ++k) key[k] = std::llround(s.normal[k] * q);
    key[8] = std::llround((s.offset * scale) * q);
    bool placed = false;
    auto& cand = buckets[key];
    for (int gi : cand) {
      Group& g = groups[gi];
      if ((g.normal - s.normal).norm() <= 1e-9 &&
          std::abs(g.offset - s.offset) <= 1e-9 * (1.0 + std::abs(g.offset))) {
        g.members.push_back(static_cast<int>(si));
        placed = true;
        break;
      }
    }
    if (!placed) {
      cand.push_back(static_cast<int>(groups.size()));
      groups.push_back({s.normal, s.offset, {static_cast<int>(si)}});
    }
  }
  // Second chance for groups that straddle a quantization boundary.
  std::vector<int> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return groups[a].normal[0] < groups[b].normal[0];
  });
  std::vector<int> remap(groups.size());
  for (size_t i = 0; i < groups.size(); ++i) remap[i] = static_cast<int>(i);
  for (size_t a = 0; a < order.size(); ++a) {
    for (size_t b = a + 1; b < order.size(); ++b) {
      Group& ga = groups[order[a]];
      Group& gb = groups[order[b]];
      if (gb.normal[0] - ga.normal[0] > 1e-8) break;
      int ra = remap[order[a]], rb = remap[order[b]];
      while (remap[ra] != ra) ra = remap[ra];
      while (remap[rb] != rb) rb = remap[rb];
      if (ra == rb) continue;
      if ((ga.normal - gb.normal).norm() <= 1e-9 &&
          std::abs(ga.offset - gb.offset) <= 1e-9 * (1.0 + std::abs(ga.offset)))
        remap[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::map<int, std::vector<int>> merged;  // root group -> simplex members
  for (size_t i = 0; i < groups.size(); ++i) {
    int r = static_cast<int>(i);
    while (remap[r] != r) r = remap[r];
    auto& lst = merged[r];
    lst.insert(lst.end(), groups[i].members.begin(), groups[i].members.end());
  }

  const double plane_eps = eps / scale;
  for (auto& [root, members] : merged) {
    HullFacet f;
    if (members.size() == 1) {
      const SimplicialFacet& s = out.simplices[members[0]];
      f.normal = s.normal;
      f.offset = s.offset;
    } else {
      // Refit the plane over all corner points of the group.
      std::vector<int> pts_idx;
      for (int si : members)
        for (int c : out.simplices[si].corners) pts_idx.push_back(c);
      std::sort(pts_idx.begin(), pts_idx.end());
      pts_idx.erase(std::unique(pts_idx.begin(), pts_idx.end()), pts_idx.end());
      Vec c0 = Vec::Zero(n);
      for (int i : pts_idx) c0 += input[i];
      c0 /= static_cast<double>(pts_idx.size());
      Mat centered(pts_idx.size(), n);
      for (size_t i = 0; i < pts_idx.size(); ++i)
        centered.row(i) = (input[pts_idx[i]] - c0).transpose();
      Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullV);
      Vec nrm = svd.matrixV().col(n - 1);
      if (nrm.dot(groups[root].normal) < 0) nrm = -nrm;
      f.normal = nrm / nrm.norm();
      f.offset = f.normal.dot(c0);
    }
    for (int i = 0; i < m; ++i)
      if (std::abs(f.normal.dot(input[i]) - f.offset) <= plane_eps &&
          vert_mark[i])
        f.points.push_back(i);
    out.facets.push_back(std::move(f));
  }
  std::sort(out.facets.begin(), out.facets.end(),
            [](const HullFacet& a, const HullFacet& b) {
              for (int k = 0; k < a.normal.size(); ++k) {
                if (a.normal[k] < b.normal[k] - 1e-12) return true;
                if (a.normal[k] > b.normal[k] + 1e-12) return false;
              }
              return a.offset < b.offset;
            });
  return out;
}

}  // namespace cvx

#endif  // CVX_HULL_HPP
