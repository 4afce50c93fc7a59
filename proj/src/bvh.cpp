#include "finsim/bvh.hpp"

#include "finsim/error.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace finsim {

namespace {

constexpr int kBins = 16;
constexpr int kLeafSize = 4;
constexpr double kTraversalCost = 1.0;
constexpr double kIntersectCost = 1.5;

double half_area(const Eigen::Array3d& lo, const Eigen::Array3d& hi) {
  const Eigen::Array3d e = (hi - lo).max(0.0);
  return e.x() * e.y() + e.y() * e.z() + e.z() * e.x();
}

struct Box {
  Eigen::Array3d lo = Eigen::Array3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Array3d hi = Eigen::Array3d::Constant(-std::numeric_limits<double>::infinity());
  void grow(const Eigen::Array3d& l, const Eigen::Array3d& h) {
    lo = lo.min(l);
    hi = hi.max(h);
  }
};

bool slab(const Eigen::Array3d& lo, const Eigen::Array3d& hi, const Eigen::Array3d& org,
          const Eigen::Array3d& inv, double t_min, double t_max, double& t_enter) {
  const Eigen::Array3d t0 = (lo - org) * inv;
  const Eigen::Array3d t1 = (hi - org) * inv;
  const double tn = std::max(t0.min(t1).maxCoeff(), t_min);
  const double tf = std::min(t0.max(t1).minCoeff(), t_max);
  t_enter = tn;
  return tn <= tf;
}

}  // namespace

Bvh::Bvh(const Points3d& vertices, const TriIndices& triangles) {
  const int n = static_cast<int>(triangles.cols());
  tris_.resize(static_cast<std::size_t>(n));
  std::vector<Eigen::Array3d> lo(tris_.size()), hi(tris_.size()), centroids(tris_.size());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k)
      require(triangles(k, i) >= 0 && triangles(k, i) < vertices.cols(), ErrorCode::SceneInvalid,
              "triangle index out of range");
    const Vec3d a = vertices.col(triangles(0, i));
    const Vec3d b = vertices.col(triangles(1, i));
    const Vec3d c = vertices.col(triangles(2, i));
    tris_[i] = {a, b - a, c - a};
    lo[i] = a.array().min(b.array()).min(c.array());
    hi[i] = a.array().max(b.array()).max(c.array());
    centroids[i] = (a + b + c).array() / 3.0;
  }
  ids_.resize(tris_.size());
  std::iota(ids_.begin(), ids_.end(), 0);
  if (n == 0) return;
  nodes_.reserve(2 * tris_.size());
  build(ids_, 0, n, centroids, lo, hi, 0);
}

int Bvh::build(std::vector<int>& order, int begin, int end, const std::vector<Eigen::Array3d>& centroids,
               const std::vector<Eigen::Array3d>& lo, const std::vector<Eigen::Array3d>& hi, int depth) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Box bounds, cbounds;
  for (int i = begin; i < end; ++i) {
    bounds.grow(lo[order[i]], hi[order[i]]);
    cbounds.grow(centroids[order[i]], centroids[order[i]]);
  }
  nodes_[index].lo = bounds.lo;
  nodes_[index].hi = bounds.hi;
  const int count = end - begin;

  auto make_leaf = [&] {
    nodes_[index].left_or_first = begin;
    nodes_[index].count = count;
    return index;
  };
  if (count <= kLeafSize || depth > 60) return make_leaf();

  int axis;
  (cbounds.hi - cbounds.lo).maxCoeff(&axis);
  const double extent = cbounds.hi[axis] - cbounds.lo[axis];
  if (extent <= 0.0) return make_leaf();

  std::array<Box, kBins> bins;
  std::array<int, kBins> counts{};
  auto bin_of = [&](int prim) {
    const int b = static_cast<int>(kBins * (centroids[prim][axis] - cbounds.lo[axis]) / extent);
    return std::clamp(b, 0, kBins - 1);
  };
  for (int i = begin; i < end; ++i) {
    const int b = bin_of(order[i]);
    ++counts[b];
    bins[b].grow(lo[order[i]], hi[order[i]]);
  }
  std::array<double, kBins - 1> cost{};
  Box left;
  int left_count = 0;
  for (int b = 0; b < kBins - 1; ++b) {
    left.grow(bins[b].lo, bins[b].hi);
    left_count += counts[b];
    cost[b] = left_count * (left_count ? half_area(left.lo, left.hi) : 0.0);
  }
  Box right;
  int right_count = 0;
  for (int b = kBins - 1; b > 0; --b) {
    right.grow(bins[b].lo, bins[b].hi);
    right_count += counts[b];
    cost[b - 1] += right_count * (right_count ? half_area(right.lo, right.hi) : 0.0);
  }
  const auto best = std::min_element(cost.begin(), cost.end());
  const int split_bin = static_cast<int>(best - cost.begin());
  const double split_cost = kTraversalCost + kIntersectCost * *best / half_area(bounds.lo, bounds.hi);
  if (split_cost >= kIntersectCost * count && count <= 16) return make_leaf();

  auto mid_it = std::stable_partition(order.begin() + begin, order.begin() + end,
                                      [&](int prim) { return bin_of(prim) <= split_bin; });
  int mid = static_cast<int>(mid_it - order.begin());
  if (mid == begin || mid == end) {
    mid = begin + count / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end, [&](int a, int b) {
      return centroids[a][axis] < centroids[b][axis] || (centroids[a][axis] == centroids[b][axis] && a < b);
    });
  }
  build(order, begin, mid, centroids, lo, hi, depth + 1);
  const int right_index = build(order, mid, end, centroids, lo, hi, depth + 1);
  // Left child is always index + 1.
  nodes_[index].left_or_first = right_index;
  nodes_[index].count = 0;
  return index;
}

bool Bvh::hit_triangle(int i, const Ray& ray, double t_min, double t_max, TriangleHit& hit) const {
  const Tri& tri = tris_[static_cast<std::size_t>(i)];
  const Vec3d p = ray.dir.cross(tri.e2);
  const double det = tri.e1.dot(p);
  if (det == 0.0) return false;
  const double inv = 1.0 / det;
  const Vec3d s = ray.origin - tri.a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3d q = s.cross(tri.e1);
  const double v = ray.dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = tri.e2.dot(q) * inv;
  if (t <= t_min || t >= t_max) return false;
  hit = {t, i, u, v};
  return true;
}

bool Bvh::intersect(const Ray& ray, double t_min, double t_max, TriangleHit& hit) const {
  if (nodes_.empty()) return false;
  const Eigen::Array3d org = ray.origin.array();
  const Eigen::Array3d inv = ray.dir.array().inverse();
  std::array<int, 128> stack;
  int sp = 0;
  stack[sp++] = 0;
  bool found = false;
  double closest = t_max;
  while (sp > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--sp])];
    double t_enter;
    if (!slab(node.lo, node.hi, org, inv, t_min, closest, t_enter)) continue;
    if (node.count > 0) {
      for (int k = node.left_or_first; k < node.left_or_first + node.count; ++k)
        if (hit_triangle(ids_[static_cast<std::size_t>(k)], ray, t_min, closest, hit)) {
          closest = hit.t;
          found = true;
        }
      continue;
    }
    const int left = static_cast<int>(&node - nodes_.data()) + 1;
    const int right = node.left_or_first;
    double tl, tr;
    const bool hl = slab(nodes_[left].lo, nodes_[left].hi, org, inv, t_min, closest, tl);
    const bool hr = slab(nodes_[right].lo, nodes_[right].hi, org, inv, t_min, closest, tr);
    // Push the farther child first so the nearer one is visited next.
    if (hl && hr) {
      stack[sp++] = tl <= tr ? right : left;
      stack[sp++] = tl <= tr ? left : right;
    } else if (hl) {
      stack[sp++] = left;
    } else if (hr) {
      stack[sp++] = right;
    }
  }
  return found;
}

bool Bvh::occluded(const Ray& ray, double t_min, double t_max) const {
  if (nodes_.empty()) return false;
  const Eigen::Array3d org = ray.origin.array();
  const Eigen::Array3d inv = ray.dir.array().inverse();
  std::array<int, 128> stack;
  int sp = 0;
  stack[sp++] = 0;
  TriangleHit scratch;
  while (sp > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--sp])];
    double t_enter;
    if (!slab(node.lo, node.hi, org, inv, t_min, t_max, t_enter)) continue;
    if (node.count > 0) {
      for (int k = node.left_or_first; k < node.left_or_first + node.count; ++k)
        if (hit_triangle(ids_[static_cast<std::size_t>(k)], ray, t_min, t_max, scratch)) return true;
      continue;
    }
    stack[sp++] = node.left_or_first;
    stack[sp++] = static_cast<int>(&node - nodes_.data()) + 1;
  }
  return false;
}

int Bvh::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::pair<int, int>> stack{{0, 1}};
  int best = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[static_cast<std::size_t>(i)].count == 0) {
      stack.emplace_back(i + 1, d + 1);
      stack.emplace_back(nodes_[static_cast<std::size_t>(i)].left_or_first, d + 1);
    }
  }
  return best;
}

}  // namespace finsim
