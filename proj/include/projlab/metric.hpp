#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/geometry.hpp"

namespace projlab {

namespace detail {

inline double dist2(const Point2& a, const Point2& b) {
  double dx = a.x1 - b.x1, dy = a.x2 - b.x2;
  return dx * dx + dy * dy;
}

// Uniform bucket grid over a point cloud; cells of side `cell`. Neighbor
// queries touch only the cells overlapping the query disk.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Point2>& pts, double cell)
      : pts_(pts), cell_(cell > 0 ? cell : 1.0) {
    buckets_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::int64_t x = coord(pts[i].x1), y = coord(pts[i].x2);
      min_x_ = std::min(min_x_, x);
      max_x_ = std::max(max_x_, x);
      min_y_ = std::min(min_y_, y);
      max_y_ = std::max(max_y_, y);
      buckets_[pack(x, y)].push_back(i);
    }
  }

  // squared distance from q to the nearest stored point, searched in
  // expanding shells of cells; exact (no approximation).
  double nearest_dist2(const Point2& q) const {
    if (buckets_.empty()) return std::numeric_limits<double>::infinity();
    std::int64_t cx = coord(q.x1), cy = coord(q.x2);
    // once `ring` exceeds this, every cell in the shell is empty
    std::int64_t last_ring =
        std::max({std::llabs(cx - min_x_), std::llabs(cx - max_x_),
                  std::llabs(cy - min_y_), std::llabs(cy - max_y_)});
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t ring = 0; ring <= last_ring; ++ring) {
      // once the whole shell is farther than the best hit, stop
      if (best < std::numeric_limits<double>::infinity()) {
        double ring_min = (static_cast<double>(ring) - 1.0) * cell_;
        if (ring_min > 0 && ring_min * ring_min > best) break;
      }
      for (std::int64_t dx = -ring; dx <= ring; ++dx) {
        for (std::int64_t dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
          auto it = buckets_.find(pack(cx + dx, cy + dy));
          if (it == buckets_.end()) continue;
          for (std::size_t i : it->second)
            best = std::min(best, dist2(q, pts_[i]));
        }
      }
    }
    return best;
  }

  // any stored point strictly within distance r of q?
  bool has_within(const Point2& q, double r) const {
    std::int64_t cx = coord(q.x1), cy = coord(q.x2);
    std::int64_t span = static_cast<std::int64_t>(std::floor(r / cell_)) + 1;
    double r2 = r * r;
    for (std::int64_t dx = -span; dx <= span; ++dx)
      for (std::int64_t dy = -span; dy <= span; ++dy) {
        auto it = buckets_.find(pack(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t i : it->second)
          if (dist2(q, pts_[i]) < r2) return true;
      }
    return false;
  }

  void insert(const Point2& p, std::size_t idx) {
    std::int64_t x = coord(p.x1), y = coord(p.x2);
    min_x_ = std::min(min_x_, x);
    max_x_ = std::max(max_x_, x);
    min_y_ = std::min(min_y_, y);
    max_y_ = std::max(max_y_, y);
    buckets_[pack(x, y)].push_back(idx);
  }

 private:
  std::int64_t coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^
           (static_cast<std::uint64_t>(y) & 0xffffffffULL);
  }

  const std::vector<Point2>& pts_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
  std::int64_t min_x_ = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_x_ = std::numeric_limits<std::int64_t>::min();
  std::int64_t min_y_ = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_y_ = std::numeric_limits<std::int64_t>::min();
};

}  // namespace detail

// d0(A, B) = min over pairs of Euclidean distance. Brute force.
inline double min_pair_dist(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  if (a.empty() || b.empty())
    throw ValidationError("min_pair_dist: empty point set");
  double best = std::numeric_limits<double>::infinity();
  for (const Point2& p : a)
    for (const Point2& q : b) best = std::min(best, detail::dist2(p, q));
  return std::sqrt(best);
}

// One-sided Hausdorff: sup over a of dist(a, B).
inline double directed_hausdorff_brute(const std::vector<Point2>& a,
                                       const std::vector<Point2>& b) {
  double worst = 0.0;
  for (const Point2& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& q : b) best = std::min(best, detail::dist2(p, q));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

inline double hausdorff_brute(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  if (a.empty() || b.empty())
    throw ValidationError("hausdorff: empty point set");
  return std::max(directed_hausdorff_brute(a, b), directed_hausdorff_brute(b, a));
}

// Grid-accelerated Hausdorff; exact, just faster on large clouds.
inline double hausdorff_grid(const std::vector<Point2>& a, const std::vector<Point2>& b,
                             double cell_hint = 0.0) {
  if (a.empty() || b.empty())
    throw ValidationError("hausdorff: empty point set");
  auto extent = [](const std::vector<Point2>& v) {
    double m = 1e-9;
    for (const Point2& p : v) m = std::max({m, std::abs(p.x1), std::abs(p.x2)});
    return m;
  };
  double cell = cell_hint;
  if (cell <= 0) {
    double ext = std::max(extent(a), extent(b));
    double n = static_cast<double>(std::max(a.size(), b.size()));
    cell = std::max(2.0 * ext / std::sqrt(n + 1.0), 1e-9);
  }
  detail::BucketGrid ga(a, cell), gb(b, cell);
  double worst = 0.0;
  for (const Point2& p : a) worst = std::max(worst, gb.nearest_dist2(p));
  for (const Point2& q : b) worst = std::max(worst, ga.nearest_dist2(q));
  return std::sqrt(worst);
}

// Greedy maximal s-separated subset, scanning points in input order: keep a
// point iff it is at distance >= s from everything kept so far.
inline std::vector<std::size_t> separated_subset_brute(const std::vector<Point2>& pts,
                                                       double s) {
  if (!(s > 0)) throw ValidationError("separated_subset: s > 0 required");
  std::vector<std::size_t> kept;
  double s2 = s * s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool ok = true;
    for (std::size_t j : kept)
      if (detail::dist2(pts[i], pts[j]) < s2) { ok = false; break; }
    if (ok) kept.push_back(i);
  }
  return kept;
}

inline std::vector<std::size_t> separated_subset_grid(const std::vector<Point2>& pts,
                                                      double s) {
  if (!(s > 0)) throw ValidationError("separated_subset: s > 0 required");
  std::vector<Point2> kept_pts;
  kept_pts.reserve(pts.size());
  detail::BucketGrid grid(kept_pts, s);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (grid.has_within(pts[i], s)) continue;
    kept.push_back(i);
    kept_pts.push_back(pts[i]);
    grid.insert(pts[i], kept_pts.size() - 1);
  }
  return kept;
}

// Default entry points: grid path, with the brute path kept for cross-checks.
inline double hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  return hausdorff_grid(a, b);
}

inline std::vector<std::size_t> separated_subset(const std::vector<Point2>& pts, double s) {
  return separated_subset_grid(pts, s);
}

}  // namespace projlab
