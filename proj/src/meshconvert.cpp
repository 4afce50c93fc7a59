#include "finsim/meshconvert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <string>

namespace finsim {

const std::array<std::array<int, 4>, 6>& hex_faces() {
  static const std::array<std::array<int, 4>, 6> faces = {{
      {0, 3, 2, 1},  // zeta = -1
      {4, 5, 6, 7},  // zeta = +1
      {0, 1, 5, 4},  // eta = -1
      {1, 2, 6, 5},  // xi = +1
      {2, 3, 7, 6},  // eta = +1
      {3, 0, 4, 7},  // xi = -1
  }};
  return faces;
}

const std::array<std::array<int, 3>, 8>& hex_corner_signs() {
  static const std::array<std::array<int, 3>, 8> signs = {{
      {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1}, {-1, -1, 1}, {1, -1, 1}, {1, 1, 1}, {-1, 1, 1},
  }};
  return signs;
}

Vec3d element_centroid(const HexMesh& hex, Eigen::Index element) {
  Vec3d c = Vec3d::Zero();
  for (int k = 0; k < 8; ++k) c += hex.nodes.col(hex.elements(k, element));
  return c / 8.0;
}

double hex_jacobian(const HexMesh& hex, Eigen::Index element, const Vec3d& xi) {
  Mat3d j = Mat3d::Zero();
  const auto& s = hex_corner_signs();
  for (int k = 0; k < 8; ++k) {
    const Vec3d x = hex.nodes.col(hex.elements(k, element));
    const double a = 1.0 + s[k][0] * xi[0], b = 1.0 + s[k][1] * xi[1], c = 1.0 + s[k][2] * xi[2];
    const Vec3d dn(s[k][0] * b * c, a * s[k][1] * c, a * b * s[k][2]);
    j += x * dn.transpose() / 8.0;
  }
  return j.determinant();
}

double hex_volume(const HexMesh& hex, Eigen::Index element) {
  const double g = 1.0 / std::sqrt(3.0);
  double v = 0.0;
  for (double a : {-g, g})
    for (double b : {-g, g})
      for (double c : {-g, g}) v += hex_jacobian(hex, element, Vec3d(a, b, c));
  return v;
}

double total_volume(const HexMesh& hex) {
  double v = 0.0;
  for (Eigen::Index e = 0; e < hex.element_count(); ++e) v += hex_volume(hex, e);
  return v;
}

void validate(const HexMesh& hex) {
  const auto n = hex.node_count();
  require(hex.nodes.allFinite(), ErrorCode::InvalidArgument, "hex mesh has non-finite node coordinates");
  for (Eigen::Index e = 0; e < hex.element_count(); ++e) {
    std::array<int, 8> ids{};
    for (int k = 0; k < 8; ++k) {
      ids[k] = hex.elements(k, e);
      require(ids[k] >= 0 && ids[k] < n, ErrorCode::InvalidArgument,
              "element " + std::to_string(e) + " references node " + std::to_string(ids[k]) + " out of range");
    }
    std::sort(ids.begin(), ids.end());
    require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(), ErrorCode::InvalidArgument,
            "element " + std::to_string(e) + " repeats a node");
    require(hex_jacobian(hex, e, Vec3d::Zero()) > 0.0, ErrorCode::InvalidArgument,
            "element " + std::to_string(e) + " has a non-positive Jacobian at its centroid");
  }
  if (hex.displacements)
    require(hex.displacements->cols() == n, ErrorCode::CardinalityMismatch,
            "displacement field size does not match the node count");
}

std::vector<BoundaryQuad> extract_boundary(const HexMesh& hex) {
  validate(hex);
  struct Entry {
    std::array<int, 4> key;
    int element;
    int face;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(hex.element_count()) * 6);
  const auto& faces = hex_faces();
  for (Eigen::Index e = 0; e < hex.element_count(); ++e)
    for (int f = 0; f < 6; ++f) {
      Entry en{{}, static_cast<int>(e), f};
      for (int k = 0; k < 4; ++k) en.key[k] = hex.elements(faces[f][k], e);
      std::sort(en.key.begin(), en.key.end());
      entries.push_back(en);
    }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.key, a.element, a.face) < std::tie(b.key, b.element, b.face);
  });

  std::vector<BoundaryQuad> out;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].key == entries[i].key) ++j;
    const std::size_t count = j - i;
    if (count > 2)
      throw Error(ErrorCode::NonManifoldInput,
                  "a face is shared by " + std::to_string(count) + " elements (element " +
                      std::to_string(entries[i].element) + ")");
    if (count == 1) {
      BoundaryQuad q;
      q.element = entries[i].element;
      q.local_face = entries[i].face;
      for (int k = 0; k < 4; ++k) q.nodes[k] = hex.elements(faces[q.local_face][k], q.element);
      out.push_back(q);
    }
    i = j;
  }
  std::sort(out.begin(), out.end(), [](const BoundaryQuad& a, const BoundaryQuad& b) {
    return std::tie(a.element, a.local_face) < std::tie(b.element, b.local_face);
  });
  return out;
}

TriangleSoup triangulate_quads(const HexMesh& hex, std::span<const BoundaryQuad> quads) {
  std::vector<int> used;
  used.reserve(quads.size() * 4);
  for (const auto& q : quads) used.insert(used.end(), q.nodes.begin(), q.nodes.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<int> remap(static_cast<std::size_t>(hex.node_count()), -1);
  for (std::size_t i = 0; i < used.size(); ++i) remap[static_cast<std::size_t>(used[i])] = static_cast<int>(i);

  TriangleSoup soup;
  TriMesh& m = soup.mesh;
  m.vertices.resize(3, static_cast<Eigen::Index>(used.size()));
  m.source_nodes.resize(static_cast<Eigen::Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    m.vertices.col(static_cast<Eigen::Index>(i)) = hex.nodes.col(used[i]);
    m.source_nodes[static_cast<Eigen::Index>(i)] = used[i];
  }
  const auto nt = static_cast<Eigen::Index>(2 * quads.size());
  m.triangles.resize(3, nt);
  soup.owners.resize(nt);

  constexpr double kMinArea = 1e-12;
  Eigen::Index t = 0;
  for (const auto& q : quads) {
    std::array<Vec3d, 4> p;
    for (int k = 0; k < 4; ++k) p[k] = hex.nodes.col(q.nodes[k]);
    // Newell normal of the (possibly non-planar) quad.
    Vec3d qn = Vec3d::Zero();
    for (int k = 0; k < 4; ++k) qn += p[k].cross(p[(k + 1) % 4]);
    const auto signed_area = [&](int a, int b, int c) {
      return 0.5 * (p[b] - p[a]).cross(p[c] - p[a]).dot(qn.normalized());
    };
    std::array<int, 6> split = {0, 1, 2, 0, 2, 3};
    if (signed_area(0, 1, 2) <= kMinArea || signed_area(0, 2, 3) <= kMinArea) {
      if (signed_area(1, 2, 3) > kMinArea && signed_area(1, 3, 0) > kMinArea) split = {1, 2, 3, 1, 3, 0};
    }
    for (int tri = 0; tri < 2; ++tri, ++t) {
      for (int k = 0; k < 3; ++k)
        m.triangles(k, t) = remap[static_cast<std::size_t>(q.nodes[split[3 * tri + k]])];
      soup.owners[t] = q.element;
    }
  }
  compute_normals(m);
  return soup;
}

OrientResult orient_consistently(const TriMesh& tris, std::span<const int> owners, const HexMesh& hex,
                                 OrientPolicy policy) {
  require(static_cast<Eigen::Index>(owners.size()) == tris.triangle_count(), ErrorCode::CardinalityMismatch,
          "one owning element per triangle is required");
  OrientResult out{tris, 0};
  TriMesh& m = out.mesh;
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t) {
    const Vec3d a = m.vertices.col(m.triangles(0, t));
    const Vec3d b = m.vertices.col(m.triangles(1, t));
    const Vec3d c = m.vertices.col(m.triangles(2, t));
    const Vec3d n = (b - a).cross(c - a);
    const Vec3d away = (a + b + c) / 3.0 - element_centroid(hex, owners[static_cast<std::size_t>(t)]);
    if (n.dot(away) < 0.0) {
      std::swap(m.triangles(1, t), m.triangles(2, t));
      ++out.repaired;
    }
  }
  if (policy == OrientPolicy::Strict && out.repaired > 0)
    throw Error(ErrorCode::OrientationConflict,
                std::to_string(out.repaired) + " triangle(s) were wound toward their owning element");

  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // (forward, backward) uses
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles(k, t), b = m.triangles((k + 1) % 3, t);
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      (a < b ? e.first : e.second)++;
    }
  for (const auto& [key, use] : edges)
    if (use.first + use.second >= 2 && use.first != use.second)
      throw Error(ErrorCode::OrientationConflict,
                  "edge (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                      ") is traversed the same way by neighbouring triangles; an element is likely inverted");
  compute_normals(m);
  return out;
}

HexMesh apply_displacements(const HexMesh& hex) {
  require(hex.displacements.has_value(), ErrorCode::CardinalityMismatch, "hex mesh carries no displacement field");
  require(hex.displacements->cols() == hex.node_count(), ErrorCode::CardinalityMismatch,
          "displacement field has " + std::to_string(hex.displacements->cols()) + " entries for " +
              std::to_string(hex.node_count()) + " nodes");
  HexMesh out;
  out.nodes = hex.nodes + *hex.displacements;
  out.elements = hex.elements;
  return out;
}

TriMesh hex_to_surface(const HexMesh& hex, OrientPolicy policy) {
  const std::vector<BoundaryQuad> quads = extract_boundary(hex);
  TriangleSoup soup = triangulate_quads(hex, quads);
  return orient_consistently(soup.mesh, std::span<const int>(soup.owners.data(), soup.owners.size()), hex, policy)
      .mesh;
}

HexMesh make_hex_block(int nx, int ny, int nz, const Vec3d& lo, const Vec3d& hi) {
  require(nx > 0 && ny > 0 && nz > 0, ErrorCode::InvalidArgument, "block needs at least one cell per axis");
  HexMesh h;
  h.nodes.resize(3, static_cast<Eigen::Index>(nx + 1) * (ny + 1) * (nz + 1));
  auto id = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Vec3d f(double(i) / nx, double(j) / ny, double(k) / nz);
        h.nodes.col(id(i, j, k)) = lo + (hi - lo).cwiseProduct(f);
      }
  h.elements.resize(8, static_cast<Eigen::Index>(nx) * ny * nz);
  Eigen::Index e = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i, ++e) {
        h.elements.col(e) << id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k), id(i, j, k + 1),
            id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1);
      }
  return h;
}

}  // namespace finsim
