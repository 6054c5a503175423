#ifndef TASKPLAN_SENSING_HPP
#define TASKPLAN_SENSING_HPP

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "taskplan/geometry.hpp"

namespace taskplan {

/// Planar scan: hit points in the fixed frame.
using PointCloud = std::vector<Vec2>;

/// Range-scanner parameters. Beams are spread uniformly over the full
/// circle starting at the sensor heading. noise_std perturbs each
/// returned range (metres); zero disables the noise draw entirely so
/// runs stay bit-reproducible.
struct ScanConfig {
  int n_beams{360};
  double max_range{1.0};
  double noise_std{0.0};
  unsigned seed{0};
};

namespace detail {
/// Distance along a ray (origin o, unit direction d) to segment ab, or
/// nothing if they miss.
inline std::optional<double> ray_segment(const Vec2& o, const Vec2& d,
                                         const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double denom = d.x * e.y - d.y * e.x;
  if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel
  const Vec2 ao = a - o;
  const double t = (ao.x * e.y - ao.y * e.x) / denom;
  const double s = (ao.x * d.y - ao.y * d.x) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  return t;
}
}  // namespace detail

/// Cast a full scan from `sensor` against rectangular bodies and return
/// the hit points (fixed frame). Rays that reach max_range return
/// nothing, as a real range scanner would.
inline PointCloud synthesize_scan(const Pose2& sensor,
                                  const std::vector<OrientedRect>& bodies,
                                  const ScanConfig& cfg = {}) {
  PointCloud cloud;
  std::mt19937 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_std > 0 ? cfg.noise_std : 1.0);
  for (int i = 0; i < cfg.n_beams; ++i) {
    const double ang = sensor.theta + 2.0 * kPi * i / cfg.n_beams;
    const Vec2 dir{std::cos(ang), std::sin(ang)};
    double best = std::numeric_limits<double>::infinity();
    for (const OrientedRect& body : bodies) {
      const auto c = body.corners();
      for (int k = 0; k < 4; ++k) {
        if (auto t = detail::ray_segment(sensor.position(), dir, c[k], c[(k + 1) % 4])) {
          best = std::min(best, *t);
        }
      }
    }
    if (!std::isfinite(best)) continue;
    if (cfg.noise_std > 0) best += noise(rng);
    if (best < 0.0 || best > cfg.max_range) continue;
    cloud.push_back(sensor.position() + dir * best);
  }
  return cloud;
}

/// Closed point-in-rectangle test.
inline bool rect_contains(const OrientedRect& r, const Vec2& p) {
  const Vec2 local = rotate(p - r.center, -r.theta);
  return std::abs(local.x) <= r.half_x + 1e-12 &&
         std::abs(local.y) <= r.half_y + 1e-12;
}

/// Region of interest a task attends to, as a rectangle in the fixed
/// frame. Built from the task's mode and start pose (see region_for).
struct FilterRegion {
  OrientedRect rect;

  bool contains(const Vec2& p) const { return rect_contains(rect, p); }
  bool overlaps(const OrientedRect& r) const { return obb_overlap(rect, r); }
};

/// Points of `cloud` inside `region`.
inline PointCloud filter_points(const PointCloud& cloud, const FilterRegion& region) {
  PointCloud out;
  for (const Vec2& p : cloud) {
    if (region.contains(p)) out.push_back(p);
  }
  return out;
}

/// Single-linkage clustering: points closer than eps (directly or
/// through a chain) share a cluster. Returns index lists, each sorted,
/// ordered by smallest member, so the result is independent of any
/// internal traversal order.
inline std::vector<std::vector<int>> cluster_points(const PointCloud& pts,
                                                    double eps) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((pts[i] - pts[j]).norm() <= eps) {
        const int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_to_group(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_to_group[r] < 0) {
      root_to_group[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_to_group[r]].push_back(i);
  }
  return groups;
}

/// Axis-aligned bounding box of `pts` taken in the frame of `frame`,
/// returned as a fixed-frame disturbance whose axes follow that frame.
inline Disturbance bbox_disturbance(const PointCloud& pts, const Pose2& frame,
                                    DisturbanceKind kind) {
  if (pts.empty()) throw Error("bbox of an empty point set");
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x;
  for (const Vec2& p : pts) {
    const Vec2 local = rotate(p - frame.position(), -frame.theta);
    lo_x = std::min(lo_x, local.x);
    hi_x = std::max(hi_x, local.x);
    lo_y = std::min(lo_y, local.y);
    hi_y = std::max(hi_y, local.y);
  }
  const Vec2 center_local{(lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0};
  const Vec2 center = frame.position() + rotate(center_local, frame.theta);
  Disturbance d;
  d.x = center.x;
  d.y = center.y;
  d.theta = frame.theta;
  d.w = hi_x - lo_x;
  d.l = hi_y - lo_y;
  d.kind = kind;
  return d;
}

}  // namespace taskplan

#endif  // TASKPLAN_SENSING_HPP
