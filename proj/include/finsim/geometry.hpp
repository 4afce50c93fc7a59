#pragma once

#include "finsim/error.hpp"
#include "finsim/mesh.hpp"

#include <string_view>

namespace finsim {

// Pad frame: x across the width W, y along the length L, sensing face apex at
// the origin with outward normal +z. The gel body lies below, toward -z.

enum class PadFamily { Flat, Cylindrical, Ellipsoid };

PadFamily parse_pad_family(std::string_view name);
std::string_view to_string(PadFamily family);

/// Triangle group tags on a generated pad surface.
enum PadGroup : int { kSensingFace = 1, kBackFace = 2, kSideWall = 3 };

struct GelPadSpec {
  PadFamily family = PadFamily::Flat;
  double width = 35.0;
  double length = 70.0;
  double thickness = 4.0;
  double cyl_radius = 60.0;
  /// Ellipsoid semi-axes along x, y, z before re-orientation; the shortest
  /// one becomes the pole axis.
  Vec3d ellipsoid_radii{90.0, 180.0, 30.0};
  /// Cells across width / length / thickness; 0 picks ~0.4 mm edges.
  int cells_u = 0;
  int cells_v = 0;
  int cells_w = 0;
};

inline constexpr double kDefaultEdgeLength = 0.4;

void validate(const GelPadSpec& spec);

/// Cell counts actually used for a spec.
Eigen::Vector3i pad_resolution(const GelPadSpec& spec);

/// The underlying analytic shape, expressed in the pad frame.
struct PadShape {
  PadFamily family = PadFamily::Flat;
  Vec3d center = Vec3d::Zero();  ///< cylinder axis point / ellipsoid centre
  Vec3d radii = Vec3d::Zero();   ///< (r, -, r) for cylinders, (rx, ry, rz) for ellipsoids
};

PadShape pad_shape(const GelPadSpec& spec);

/// Sensing-face point for normalised coordinates (s, t) in [-1, 1]^2, and the
/// outward unit normal there.
Vec3d sensing_point(const GelPadSpec& spec, double s, double t);
Vec3d sensing_normal(const GelPadSpec& spec, double s, double t);

/// Height of the undeformed sensing face above the pad-frame point (x, y).
double sensing_height(const GelPadSpec& spec, double x, double y);

struct GelPad {
  GelPadSpec spec;
  HexMesh volume;
  /// Closed outward boundary, grouped with PadGroup tags.
  TriMesh surface;
  PadShape shape;
};

/// Structured hex volume extruded inward from the sensing face along the
/// analytic normals, and its oriented boundary.
GelPad generate_gelpad(const GelPadSpec& spec);

/// Sensing face of a surface extracted without group tags (external FEM
/// meshes): triangles facing +z in the upper half of the z range.
Eigen::VectorXi classify_sensing_face(const TriMesh& undeformed);

// ---------------------------------------------------------------------------
// Indenters

enum class IndenterKind { Cylinder, Cuboid, Sphere };

IndenterKind parse_indenter_kind(std::string_view name);
std::string_view to_string(IndenterKind kind);

struct Pose {
  Vec3d position = Vec3d::Zero();
  Mat3d rotation = Mat3d::Identity();  ///< columns are the local axes in world
};

/// Rigid indenter with an exact signed distance (negative inside).
///
/// cylinder: dims = (radius, length, -), axis along local x
/// cuboid:   dims = half extents
/// sphere:   dims = (radius, -, -)
struct Indenter {
  IndenterKind kind = IndenterKind::Cylinder;
  Vec3d dims = Vec3d(10.0, 40.0, 0.0);
  Pose pose;

  double signed_distance(const Vec3d& p) const;
  /// Unit outward gradient of the distance field.
  Vec3d normal(const Vec3d& p) const;
  /// Lowest extent along the local -z axis measured from the pose origin.
  double reach() const;
};

Indenter make_indenter(IndenterKind kind, const Vec3d& dims, const Pose& pose = {});

void validate(const Indenter& indenter);

}  // namespace finsim
