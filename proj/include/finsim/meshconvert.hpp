#pragma once

#include "finsim/error.hpp"
#include "finsim/mesh.hpp"

#include <array>
#include <span>
#include <vector>

namespace finsim {

/// Local node lists of the six hex faces, wound outward for a positively
/// oriented element.
const std::array<std::array<int, 4>, 6>& hex_faces();

/// Reference-cube corner signs of the eight hex nodes.
const std::array<std::array<int, 3>, 8>& hex_corner_signs();

Vec3d element_centroid(const HexMesh& hex, Eigen::Index element);

/// det(dx/dxi) of the trilinear map at a reference point.
double hex_jacobian(const HexMesh& hex, Eigen::Index element, const Vec3d& xi);

/// Exact volume of the trilinear element (2x2x2 Gauss integrates det J exactly).
double hex_volume(const HexMesh& hex, Eigen::Index element);

/// Indices in range, eight distinct nodes per element, positive Jacobian at
/// every centroid, displacements (if any) matching the node count.
void validate(const HexMesh& hex);

struct BoundaryQuad {
  std::array<int, 4> nodes;  ///< in the owning element's outward face order
  int element = 0;
  int local_face = 0;
};

/// Faces that occur in exactly one element. Faces are identified by their
/// sorted node ids, so coincident-but-unshared nodes stay separate.
std::vector<BoundaryQuad> extract_boundary(const HexMesh& hex);

struct TriangleSoup {
  TriMesh mesh;
  Eigen::VectorXi owners;  ///< owning element per triangle
};

/// Splits each quad (n0, n1, n2, n3) into (n0, n1, n2) and (n0, n2, n3). A quad
/// whose fixed diagonal would leave a zero-area or folded triangle is split
/// along the other diagonal instead. Only boundary nodes become vertices.
TriangleSoup triangulate_quads(const HexMesh& hex, std::span<const BoundaryQuad> quads);

enum class OrientPolicy {
  Repair,  ///< re-wind triangles that face their owner, count them
  Strict,  ///< any triangle facing its owner is an error
};

struct OrientResult {
  TriMesh mesh;
  int repaired = 0;
};

/// Winds every triangle to face away from its owning element's centroid, then
/// checks that neighbours traverse shared edges in opposite directions.
OrientResult orient_consistently(const TriMesh& tris, std::span<const int> owners, const HexMesh& hex,
                                 OrientPolicy policy = OrientPolicy::Repair);

/// Nodes moved by the attached displacement field; the field is consumed.
HexMesh apply_displacements(const HexMesh& hex);

/// extract -> triangulate -> orient.
TriMesh hex_to_surface(const HexMesh& hex, OrientPolicy policy = OrientPolicy::Repair);

/// Sum of element volumes.
double total_volume(const HexMesh& hex);

/// Structured nx*ny*nz brick block spanning `lo`..`hi`, nodes ordered x-fastest.
HexMesh make_hex_block(int nx, int ny, int nz, const Vec3d& lo = Vec3d::Zero(), const Vec3d& hi = Vec3d::Ones());

}  // namespace finsim
