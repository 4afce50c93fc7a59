#include "finsim/mesh.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace finsim {

void compute_normals(TriMesh& mesh) {
  mesh.normals.resize(3, mesh.triangle_count());
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    const Vec3d a = mesh.vertices.col(mesh.triangles(0, t));
    const Vec3d b = mesh.vertices.col(mesh.triangles(1, t));
    const Vec3d c = mesh.vertices.col(mesh.triangles(2, t));
    const Vec3d n = (b - a).cross(c - a);
    const double len = n.norm();
    mesh.normals.col(t) = len > 0.0 ? Vec3d(n / len) : Vec3d::Zero();
  }
}

Points3d vertex_normals(const TriMesh& mesh) {
  Points3d n = Points3d::Zero(3, mesh.vertex_count());
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    const Vec3d a = mesh.vertices.col(mesh.triangles(0, t));
    const Vec3d b = mesh.vertices.col(mesh.triangles(1, t));
    const Vec3d c = mesh.vertices.col(mesh.triangles(2, t));
    const Vec3d area_normal = (b - a).cross(c - a);  // twice the area, along the normal
    for (int k = 0; k < 3; ++k) n.col(mesh.triangles(k, t)) += area_normal;
  }
  for (Eigen::Index v = 0; v < n.cols(); ++v) {
    const double len = n.col(v).norm();
    if (len > 0.0) n.col(v) /= len;
  }
  return n;
}

double triangle_area(const TriMesh& mesh, Eigen::Index t) {
  const Vec3d a = mesh.vertices.col(mesh.triangles(0, t));
  const Vec3d b = mesh.vertices.col(mesh.triangles(1, t));
  const Vec3d c = mesh.vertices.col(mesh.triangles(2, t));
  return 0.5 * (b - a).cross(c - a).norm();
}

double surface_area(const TriMesh& mesh) {
  double a = 0.0;
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) a += triangle_area(mesh, t);
  return a;
}

EdgeStats edge_stats(const TriMesh& mesh) {
  // key: (min, max); value: (uses, forward uses)
  std::map<std::pair<int, int>, std::pair<int, int>> edges;
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.triangles(k, t), b = mesh.triangles((k + 1) % 3, t);
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      ++e.first;
      if (a < b) ++e.second;
    }
  }
  EdgeStats s;
  s.edges = static_cast<Eigen::Index>(edges.size());
  for (const auto& [key, use] : edges) {
    if (use.first == 1) ++s.boundary_edges;
    else if (use.first == 2) ++s.manifold_edges;
    else ++s.nonmanifold_edges;
    if (use.first == 2 && use.second != 1) ++s.inconsistent_edges;
  }
  return s;
}

Eigen::Index euler_characteristic(const TriMesh& mesh) {
  std::vector<char> used(static_cast<std::size_t>(mesh.vertex_count()), 0);
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) used[static_cast<std::size_t>(mesh.triangles(k, t))] = 1;
  const Eigen::Index v = std::count(used.begin(), used.end(), 1);
  return v - edge_stats(mesh).edges + mesh.triangle_count();
}

TriMesh submesh(const TriMesh& mesh, const std::vector<Eigen::Index>& triangles) {
  std::vector<int> remap(static_cast<std::size_t>(mesh.vertex_count()), -1);
  std::vector<int> kept;
  for (Eigen::Index t : triangles)
    for (int k = 0; k < 3; ++k) {
      int& slot = remap[static_cast<std::size_t>(mesh.triangles(k, t))];
      if (slot < 0) {
        slot = static_cast<int>(kept.size());
        kept.push_back(mesh.triangles(k, t));
      }
    }
  // Keep the original vertex order so the result is independent of triangle order.
  std::sort(kept.begin(), kept.end());
  for (std::size_t i = 0; i < kept.size(); ++i) remap[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);

  TriMesh out;
  out.vertices.resize(3, static_cast<Eigen::Index>(kept.size()));
  if (mesh.source_nodes.size() == mesh.vertex_count()) out.source_nodes.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.vertices.col(static_cast<Eigen::Index>(i)) = mesh.vertices.col(kept[i]);
    if (out.source_nodes.size() > 0) out.source_nodes[static_cast<Eigen::Index>(i)] = mesh.source_nodes[kept[i]];
  }
  const auto n = static_cast<Eigen::Index>(triangles.size());
  out.triangles.resize(3, n);
  out.normals.resize(3, n);
  if (mesh.groups.size() == mesh.triangle_count()) out.groups.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index t = triangles[static_cast<std::size_t>(i)];
    for (int k = 0; k < 3; ++k) out.triangles(k, i) = remap[static_cast<std::size_t>(mesh.triangles(k, t))];
    if (mesh.normals.cols() == mesh.triangle_count()) out.normals.col(i) = mesh.normals.col(t);
    if (out.groups.size() > 0) out.groups[i] = mesh.groups[t];
  }
  if (mesh.normals.cols() != mesh.triangle_count()) compute_normals(out);
  return out;
}

TriMesh select_group(const TriMesh& mesh, int group) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < mesh.groups.size(); ++t)
    if (mesh.groups[t] == group) keep.push_back(t);
  return submesh(mesh, keep);
}

}  // namespace finsim
