#include "finsim/geometry.hpp"

#include "finsim/meshconvert.hpp"

#include <algorithm>
#include <cmath>

namespace finsim {

PadFamily parse_pad_family(std::string_view name) {
  if (name == "flat") return PadFamily::Flat;
  if (name == "cylindrical" || name == "cylinder") return PadFamily::Cylindrical;
  if (name == "ellipsoid") return PadFamily::Ellipsoid;
  throw Error(ErrorCode::UnknownPreset, "unknown gel pad family '" + std::string(name) + "'");
}

std::string_view to_string(PadFamily family) {
  switch (family) {
    case PadFamily::Flat: return "flat";
    case PadFamily::Cylindrical: return "cylindrical";
    case PadFamily::Ellipsoid: return "ellipsoid";
  }
  return "?";
}

namespace {

// Ellipsoid radii in the pad frame: pole (shortest) on z, the smaller of the
// other two across the width.
Vec3d pad_frame_radii(const Vec3d& abc) {
  std::array<double, 3> r = {abc[0], abc[1], abc[2]};
  std::sort(r.begin(), r.end());
  return {r[1], r[2], r[0]};
}

double cylinder_half_angle(const GelPadSpec& s) { return std::asin(std::min(1.0, s.width / (2.0 * s.cyl_radius))); }

double curve_length(const GelPadSpec& spec, bool along_width) {
  constexpr int kSegments = 512;
  double len = 0.0;
  Vec3d prev = along_width ? sensing_point(spec, -1.0, 0.0) : sensing_point(spec, 0.0, -1.0);
  for (int i = 1; i <= kSegments; ++i) {
    const double u = -1.0 + 2.0 * i / kSegments;
    const Vec3d p = along_width ? sensing_point(spec, u, 0.0) : sensing_point(spec, 0.0, u);
    len += (p - prev).norm();
    prev = p;
  }
  return len;
}

}  // namespace

void validate(const GelPadSpec& spec) {
  require(spec.width > 0 && spec.length > 0 && spec.thickness > 0, ErrorCode::InvalidArgument,
          "gel pad width, length and thickness must be positive");
  require(spec.cells_u >= 0 && spec.cells_v >= 0 && spec.cells_w >= 0, ErrorCode::InvalidArgument,
          "cell counts must be non-negative");
  switch (spec.family) {
    case PadFamily::Flat: break;
    case PadFamily::Cylindrical:
      require(spec.cyl_radius > 0, ErrorCode::InvalidArgument, "cylinder radius must be positive");
      require(spec.cyl_radius >= spec.width / 2.0, ErrorCode::PatchDoesNotFit,
              "pad width exceeds the cylinder diameter");
      require(spec.thickness < spec.cyl_radius, ErrorCode::PatchDoesNotFit, "pad thickness reaches the cylinder axis");
      break;
    case PadFamily::Ellipsoid: {
      require((spec.ellipsoid_radii.array() > 0).all(), ErrorCode::InvalidArgument,
              "ellipsoid radii must be positive");
      const Vec3d r = pad_frame_radii(spec.ellipsoid_radii);
      const double corner = std::pow(spec.width / (2 * r.x()), 2) + std::pow(spec.length / (2 * r.y()), 2);
      require(corner < 1.0, ErrorCode::PatchDoesNotFit, "W x L patch does not fit on the ellipsoid cap");
      require(spec.thickness < r.z(), ErrorCode::PatchDoesNotFit, "pad thickness exceeds the pole radius");
      break;
    }
  }
}

PadShape pad_shape(const GelPadSpec& spec) {
  switch (spec.family) {
    case PadFamily::Flat: return {PadFamily::Flat, Vec3d::Zero(), Vec3d::Zero()};
    case PadFamily::Cylindrical:
      return {PadFamily::Cylindrical, Vec3d(0, 0, -spec.cyl_radius), Vec3d(spec.cyl_radius, 0, spec.cyl_radius)};
    case PadFamily::Ellipsoid: {
      const Vec3d r = pad_frame_radii(spec.ellipsoid_radii);
      return {PadFamily::Ellipsoid, Vec3d(0, 0, -r.z()), r};
    }
  }
  return {};
}

Vec3d sensing_point(const GelPadSpec& spec, double s, double t) {
  const double y = t * spec.length / 2.0;
  switch (spec.family) {
    case PadFamily::Flat: return {s * spec.width / 2.0, y, 0.0};
    case PadFamily::Cylindrical: {
      const double phi = s * cylinder_half_angle(spec), r = spec.cyl_radius;
      return {r * std::sin(phi), y, r * std::cos(phi) - r};
    }
    case PadFamily::Ellipsoid: {
      const Vec3d r = pad_frame_radii(spec.ellipsoid_radii);
      const double x = s * spec.width / 2.0;
      const double q = 1.0 - (x / r.x()) * (x / r.x()) - (y / r.y()) * (y / r.y());
      return {x, y, r.z() * std::sqrt(std::max(0.0, q)) - r.z()};
    }
  }
  return Vec3d::Zero();
}

Vec3d sensing_normal(const GelPadSpec& spec, double s, double t) {
  switch (spec.family) {
    case PadFamily::Flat: return Vec3d::UnitZ();
    case PadFamily::Cylindrical: {
      const double phi = s * cylinder_half_angle(spec);
      return {std::sin(phi), 0.0, std::cos(phi)};
    }
    case PadFamily::Ellipsoid: {
      const Vec3d r = pad_frame_radii(spec.ellipsoid_radii);
      const Vec3d p = sensing_point(spec, s, t) + Vec3d(0, 0, r.z());
      return p.cwiseQuotient(r.cwiseProduct(r)).normalized();
    }
  }
  return Vec3d::UnitZ();
}

double sensing_height(const GelPadSpec& spec, double x, double y) {
  switch (spec.family) {
    case PadFamily::Flat: return 0.0;
    case PadFamily::Cylindrical: {
      const double r = spec.cyl_radius;
      return std::sqrt(std::max(0.0, r * r - x * x)) - r;
    }
    case PadFamily::Ellipsoid: {
      const Vec3d r = pad_frame_radii(spec.ellipsoid_radii);
      const double q = 1.0 - (x / r.x()) * (x / r.x()) - (y / r.y()) * (y / r.y());
      return r.z() * std::sqrt(std::max(0.0, q)) - r.z();
    }
  }
  return 0.0;
}

Eigen::Vector3i pad_resolution(const GelPadSpec& spec) {
  validate(spec);
  const auto cells = [](int given, double extent) {
    return given > 0 ? given : std::max(1, static_cast<int>(std::lround(extent / kDefaultEdgeLength)));
  };
  return {cells(spec.cells_u, curve_length(spec, true)), cells(spec.cells_v, curve_length(spec, false)),
          cells(spec.cells_w, spec.thickness)};
}

GelPad generate_gelpad(const GelPadSpec& spec) {
  const Eigen::Vector3i res = pad_resolution(spec);
  const int nu = res[0], nv = res[1], nw = res[2];
  GelPad pad;
  pad.spec = spec;
  pad.shape = pad_shape(spec);

  HexMesh& h = pad.volume;
  const auto id = [&](int i, int j, int k) { return i + (nu + 1) * (j + (nv + 1) * k); };
  h.nodes.resize(3, static_cast<Eigen::Index>(nu + 1) * (nv + 1) * (nw + 1));
  for (int j = 0; j <= nv; ++j)
    for (int i = 0; i <= nu; ++i) {
      const double s = -1.0 + 2.0 * i / nu, t = -1.0 + 2.0 * j / nv;
      const Vec3d p = sensing_point(spec, s, t);
      const Vec3d n = sensing_normal(spec, s, t);
      // Layer 0 is the deepest; layer nw is the sensing face itself.
      for (int k = 0; k <= nw; ++k) {
        const double depth = spec.thickness * (1.0 - static_cast<double>(k) / nw);
        h.nodes.col(id(i, j, k)) = k == nw ? p : Vec3d(p - depth * n);
      }
    }
  h.elements.resize(8, static_cast<Eigen::Index>(nu) * nv * nw);
  Eigen::Index e = 0;
  for (int k = 0; k < nw; ++k)
    for (int j = 0; j < nv; ++j)
      for (int i = 0; i < nu; ++i, ++e)
        h.elements.col(e) << id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k), id(i, j, k + 1),
            id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1);
  validate(h);

  const std::vector<BoundaryQuad> quads = extract_boundary(h);
  TriangleSoup soup = triangulate_quads(h, quads);
  OrientResult oriented =
      orient_consistently(soup.mesh, std::span<const int>(soup.owners.data(), soup.owners.size()), h);
  pad.surface = std::move(oriented.mesh);
  pad.surface.groups.resize(pad.surface.triangle_count());
  for (std::size_t q = 0; q < quads.size(); ++q) {
    const int g = quads[q].local_face == 1 ? kSensingFace : quads[q].local_face == 0 ? kBackFace : kSideWall;
    pad.surface.groups[static_cast<Eigen::Index>(2 * q)] = g;
    pad.surface.groups[static_cast<Eigen::Index>(2 * q + 1)] = g;
  }
  return pad;
}

Eigen::VectorXi classify_sensing_face(const TriMesh& m) {
  Eigen::VectorXi groups = Eigen::VectorXi::Constant(m.triangle_count(), kSideWall);
  if (m.vertex_count() == 0) return groups;
  const double zmin = m.vertices.row(2).minCoeff(), zmax = m.vertices.row(2).maxCoeff();
  const double zmid = 0.5 * (zmin + zmax);
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t) {
    const Vec3d c = (m.vertices.col(m.triangles(0, t)) + m.vertices.col(m.triangles(1, t)) +
                     m.vertices.col(m.triangles(2, t))) /
                    3.0;
    const Vec3d a = m.vertices.col(m.triangles(0, t));
    const Vec3d n = (m.vertices.col(m.triangles(1, t)) - a).cross(m.vertices.col(m.triangles(2, t)) - a);
    const double len = n.norm();
    if (len <= 0.0) continue;
    if (n.z() / len > 0.5 && c.z() > zmid) groups[t] = kSensingFace;
    else if (n.z() / len < -0.5 && c.z() <= zmid) groups[t] = kBackFace;
  }
  return groups;
}

// ---------------------------------------------------------------------------

IndenterKind parse_indenter_kind(std::string_view name) {
  if (name == "cylinder") return IndenterKind::Cylinder;
  if (name == "cuboid" || name == "box") return IndenterKind::Cuboid;
  if (name == "sphere") return IndenterKind::Sphere;
  throw Error(ErrorCode::UnknownPreset, "unknown indenter kind '" + std::string(name) + "'");
}

std::string_view to_string(IndenterKind kind) {
  switch (kind) {
    case IndenterKind::Cylinder: return "cylinder";
    case IndenterKind::Cuboid: return "cuboid";
    case IndenterKind::Sphere: return "sphere";
  }
  return "?";
}

double Indenter::signed_distance(const Vec3d& p) const {
  const Vec3d q = pose.rotation.transpose() * (p - pose.position);
  switch (kind) {
    case IndenterKind::Sphere: return q.norm() - dims[0];
    case IndenterKind::Cuboid: {
      const Vec3d d = q.cwiseAbs() - dims;
      return d.cwiseMax(0.0).norm() + std::min(d.maxCoeff(), 0.0);
    }
    case IndenterKind::Cylinder: {
      const Vec2d d(std::hypot(q.y(), q.z()) - dims[0], std::abs(q.x()) - dims[1] / 2.0);
      return d.cwiseMax(0.0).norm() + std::min(d.maxCoeff(), 0.0);
    }
  }
  return 0.0;
}

Vec3d Indenter::normal(const Vec3d& p) const {
  constexpr double h = 1e-6;
  Vec3d g;
  for (int i = 0; i < 3; ++i) {
    Vec3d e = Vec3d::Zero();
    e[i] = h;
    g[i] = signed_distance(p + e) - signed_distance(p - e);
  }
  const double len = g.norm();
  return len > 0.0 ? Vec3d(g / len) : Vec3d(pose.rotation.col(2));
}

double Indenter::reach() const {
  const Mat3d& r = pose.rotation;
  switch (kind) {
    case IndenterKind::Sphere: return dims[0];
    case IndenterKind::Cuboid: return dims.dot(r.row(2).cwiseAbs().transpose());
    case IndenterKind::Cylinder: {
      const double az = std::abs(r(2, 0));
      return dims[0] * std::sqrt(std::max(0.0, 1.0 - az * az)) + dims[1] / 2.0 * az;
    }
  }
  return 0.0;
}

void validate(const Indenter& ind) {
  const int needed = ind.kind == IndenterKind::Sphere ? 1 : ind.kind == IndenterKind::Cylinder ? 2 : 3;
  for (int i = 0; i < needed; ++i)
    require(ind.dims[i] > 0.0, ErrorCode::InvalidArgument, "indenter dimensions must be positive");
  require((ind.pose.rotation.transpose() * ind.pose.rotation - Mat3d::Identity()).norm() < 1e-9 &&
              ind.pose.rotation.determinant() > 0,
          ErrorCode::InvalidArgument, "indenter rotation must be proper orthonormal");
}

Indenter make_indenter(IndenterKind kind, const Vec3d& dims, const Pose& pose) {
  Indenter ind{kind, dims, pose};
  validate(ind);
  return ind;
}

}  // namespace finsim
