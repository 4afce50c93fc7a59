#pragma once

// Independent reference implementations used only by the tests.

#include "finsim/meshconvert.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace finsim::oracle {

/// O(F^2) boundary search: a face is on the boundary when no other face in
/// the whole mesh has the same node set. Returns sorted node sets.
inline std::vector<std::array<int, 4>> brute_force_boundary(const HexMesh& h) {
  static const int faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  std::vector<std::array<int, 4>> all;
  for (Eigen::Index e = 0; e < h.element_count(); ++e)
    for (const auto& f : faces) {
      std::array<int, 4> k{};
      for (int i = 0; i < 4; ++i) k[i] = h.elements(f[i], e);
      std::sort(k.begin(), k.end());
      all.push_back(k);
    }
  std::vector<std::array<int, 4>> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool shared = false;
    for (std::size_t j = 0; j < all.size() && !shared; ++j) shared = i != j && all[i] == all[j];
    if (!shared) out.push_back(all[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool same_face_sets(const std::vector<BoundaryQuad>& quads, const std::vector<std::array<int, 4>>& ref) {
  std::vector<std::array<int, 4>> got;
  for (const auto& q : quads) {
    auto k = q.nodes;
    std::sort(k.begin(), k.end());
    got.push_back(k);
  }
  std::sort(got.begin(), got.end());
  return got == ref;
}

/// Volume as the flux of F = x/3 through the surface, one triangle at a time.
inline double divergence_volume(const TriMesh& m) {
  double v = 0.0;
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t) {
    const Vec3d a = m.vertices.col(m.triangles(0, t));
    const Vec3d b = m.vertices.col(m.triangles(1, t));
    const Vec3d c = m.vertices.col(m.triangles(2, t));
    const Vec3d area_normal = 0.5 * (b - a).cross(c - a);
    v += ((a + b + c) / 3.0).dot(area_normal) / 3.0;
  }
  return v;
}

/// Structured grid under a random orientation-preserving affine map, with small
/// per-node jitter so elements are not all parallelepipeds. Without jitter
/// every boundary quad is planar.
inline HexMesh random_affine_grid(std::mt19937_64& rng, int nx, int ny, int nz, double jitter = 0.1) {
  HexMesh h = make_hex_block(nx, ny, nz, Vec3d::Zero(), Vec3d(nx, ny, nz));
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Mat3d a = Mat3d::Identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) += u(rng);
  if (a.determinant() < 0) a.col(0) *= -1;
  const Vec3d shift(u(rng) * 10, u(rng) * 10, u(rng) * 10);
  for (Eigen::Index i = 0; i < h.node_count(); ++i) {
    Vec3d p = h.nodes.col(i) + jitter * Vec3d(u(rng), u(rng), u(rng));
    h.nodes.col(i) = a * p + shift;
  }
  return h;
}

}  // namespace finsim::oracle
