#pragma once

#include "finsim/types.hpp"

#include <optional>

namespace finsim {

/// Volumetric mesh of 8-node bricks in the usual trilinear ordering: nodes
/// 0-3 walk the bottom face counter-clockwise seen from above, 4-7 the top.
struct HexMesh {
  Points3d nodes;
  HexIndices elements;
  std::optional<Points3d> displacements;

  Eigen::Index node_count() const { return nodes.cols(); }
  Eigen::Index element_count() const { return elements.cols(); }
};

/// Oriented triangle surface. `normals` holds one unit normal per triangle,
/// following the right-hand rule on the vertex order. `source_nodes`, when
/// present, maps each vertex back to the hex node it was copied from; `groups`
/// is an optional per-triangle tag.
struct TriMesh {
  Points3d vertices;
  TriIndices triangles;
  Points3d normals;
  Eigen::VectorXi source_nodes;
  Eigen::VectorXi groups;

  Eigen::Index vertex_count() const { return vertices.cols(); }
  Eigen::Index triangle_count() const { return triangles.cols(); }
};

/// Recomputes per-triangle unit normals from the winding.
void compute_normals(TriMesh& mesh);

/// Area-weighted per-vertex unit normals.
Points3d vertex_normals(const TriMesh& mesh);

double triangle_area(const TriMesh& mesh, Eigen::Index t);
double surface_area(const TriMesh& mesh);

/// Volume enclosed by a closed triangle surface (divergence theorem); positive
/// when the surface is wound outward.
template <typename DerivedV, typename DerivedF>
double signed_volume(const Eigen::MatrixBase<DerivedV>& vertices, const Eigen::MatrixBase<DerivedF>& triangles) {
  double v = 0.0;
  for (Eigen::Index t = 0; t < triangles.cols(); ++t) {
    const Vec3d a = vertices.col(triangles(0, t));
    const Vec3d b = vertices.col(triangles(1, t));
    const Vec3d c = vertices.col(triangles(2, t));
    v += a.dot(b.cross(c));
  }
  return v / 6.0;
}

inline double signed_volume(const TriMesh& mesh) { return signed_volume(mesh.vertices, mesh.triangles); }

struct EdgeStats {
  Eigen::Index edges = 0;
  Eigen::Index boundary_edges = 0;      ///< used by exactly one triangle
  Eigen::Index manifold_edges = 0;      ///< used by exactly two triangles
  Eigen::Index nonmanifold_edges = 0;   ///< used by three or more
  Eigen::Index inconsistent_edges = 0;  ///< two triangles traverse it the same way
};

EdgeStats edge_stats(const TriMesh& mesh);

/// V - E + F over the referenced vertices.
Eigen::Index euler_characteristic(const TriMesh& mesh);

/// Keeps the listed triangles and compacts the vertex set.
TriMesh submesh(const TriMesh& mesh, const std::vector<Eigen::Index>& triangles);

/// Triangles whose group tag equals `group`.
TriMesh select_group(const TriMesh& mesh, int group);

}  // namespace finsim
