#pragma once

#include "finsim/types.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace finsim {

struct Ray {
  Vec3d origin;
  Vec3d dir;  ///< need not be unit length; t is in units of |dir|
};

struct TriangleHit {
  double t = std::numeric_limits<double>::infinity();
  int triangle = -1;
  double u = 0.0, v = 0.0;  ///< barycentrics of vertices 1 and 2
};

/// Bounding volume hierarchy over a static triangle set, built with binned
/// SAH. Construction is deterministic.
class Bvh {
 public:
  Bvh() = default;
  /// `vertices` columns are points, `triangles` columns index into them.
  Bvh(const Points3d& vertices, const TriIndices& triangles);

  /// Closest hit with t in (t_min, t_max).
  bool intersect(const Ray& ray, double t_min, double t_max, TriangleHit& hit) const;
  /// Any hit with t in (t_min, t_max).
  bool occluded(const Ray& ray, double t_min, double t_max) const;

  std::size_t node_count() const { return nodes_.size(); }
  int depth() const;

 private:
  struct Node {
    Eigen::Array3d lo, hi;
    std::int32_t left_or_first = 0;  ///< child index for inner nodes, first primitive for leaves
    std::int32_t count = 0;          ///< primitive count; 0 marks an inner node
  };
  struct Tri {
    Vec3d a, e1, e2;
  };

  int build(std::vector<int>& order, int begin, int end, const std::vector<Eigen::Array3d>& centroids,
            const std::vector<Eigen::Array3d>& lo, const std::vector<Eigen::Array3d>& hi, int depth);
  bool hit_triangle(int i, const Ray& ray, double t_min, double t_max, TriangleHit& hit) const;

  std::vector<Node> nodes_;
  std::vector<Tri> tris_;
  std::vector<int> ids_;
};

}  // namespace finsim
