#pragma once

#include "finsim/geometry.hpp"
#include "finsim/spectra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finsim {

/// Planar rectangle: centre, unit normal, unit in-plane axis u and half
/// extents along (u, v) where v = normal x u.
struct Rect {
  Vec3d center = Vec3d::Zero();
  Vec3d normal = Vec3d::UnitZ();
  Vec3d axis_u = Vec3d::UnitX();
  Vec2d half_extents = Vec2d::Ones();

  Vec3d axis_v() const { return normal.cross(axis_u); }
  double area() const { return 4.0 * half_extents.x() * half_extents.y(); }
  Vec3d point(double su, double sv) const {
    return center + su * half_extents.x() * axis_u + sv * half_extents.y() * axis_v();
  }
};

void validate(const Rect& r);

struct Camera {
  Vec3d position = Vec3d::Zero();
  Vec3d look_at = Vec3d::UnitY();
  Vec3d up = Vec3d::UnitZ();
  double hfov_deg = 120.0;
  int width = 320;
  int height = 240;
};

struct Mirror {
  Rect rect;
  double reflectance = 0.9;
  /// Bowed geometry replacing the flat rectangle when present.
  std::optional<TriMesh> mesh;
  double deflection = 0.0;
};

enum class StripSide { Left, Right };

struct PaintStrip {
  Rect rect;  ///< normal points into the pad
  std::string material;
  StripSide side = StripSide::Left;
};

enum class LedPlacement { Bottom, Top };

std::string_view to_string(LedPlacement p);
LedPlacement parse_led_placement(std::string_view name);

struct LedPanel {
  Vec3d center = Vec3d::Zero();
  Vec3d normal = Vec3d::UnitZ();
  Vec3d axis_u = Vec3d::UnitX();
  Vec2d half_extents = Vec2d(10.0, 2.5);
  SampledSpectrum emission = led_spectrum();
  double radiant_scale = 1.0;
  double tilt_deg = 30.0;
  LedPlacement placement = LedPlacement::Bottom;

  Rect rect() const { return {center, normal, axis_u, half_extents}; }
};

void validate(const LedPanel& p);

/// A panel at one end of the pad, below the gel, tilted `tilt_deg` from the
/// pad plane toward the far end (0 grazes along the pad, 90 faces the
/// sensing face head-on).
LedPanel make_led_panel(const GelPadSpec& pad, LedPlacement placement, double tilt_deg, double radiant_scale = 1.0);

enum class MaterialKind { Lambertian, MirrorSpecular, CoatedFlake, FluorescentEmissive };

std::string_view to_string(MaterialKind k);
MaterialKind parse_material_kind(std::string_view name);

struct SurfaceMaterial {
  MaterialKind kind = MaterialKind::Lambertian;
  Rgb albedo = Rgb::Constant(0.5);
  double specular_fraction = 0.0;
  double roughness = 0.3;
  /// Source of the emission texture for fluorescent strips.
  std::optional<FluorescentMaterial> paint;
};

void validate(const SurfaceMaterial& m);

/// Default table: `coating`, `mirror`, `red_paint`, `green_paint`, `wall`.
std::map<std::string, SurfaceMaterial> default_materials();

/// Free-standing rectangle (enclosure walls, diffusers). Emission is
/// one-sided along the normal.
struct ScenePanel {
  Rect rect;
  std::string material;
  Rgb emission = Rgb::Zero();
};

struct RenderSettings {
  int samples_per_pixel = 64;
  int max_depth = 4;
  int rr_start_depth = 3;
  std::uint64_t seed = 1;
  double exposure = 1.0;
};

void validate(const RenderSettings& r);

struct IndentPlacement {
  Indenter indenter;
  double depth = 0.0;
};

struct Scene {
  GelPadSpec pad;
  Camera camera;
  std::optional<Mirror> mirror;
  /// Visible coated face of the gel, in scene coordinates.
  TriMesh gel_surface;
  std::string gel_material = "coating";
  std::string deformation_source = "none";
  /// Neutral or deck mesh the gel surface was imported from, if any.
  std::string external_mesh;
  std::vector<PaintStrip> paint_strips;
  std::vector<LedPanel> led_panels;
  std::vector<ScenePanel> panels;
  std::optional<IndentPlacement> indent;
  std::map<std::string, SurfaceMaterial> materials;
  RenderSettings render;
  /// World point whose image is probed for intensity sweeps.
  Vec3d probe_point = Vec3d::Zero();
};

/// Throws SceneInvalid on the first violated invariant.
void validate(const Scene& scene);

/// Camera at the pad's base viewing the sensing face through a horizontal
/// mirror; red and green strips on the two long side walls.
Scene assemble_scene(const GelPadSpec& pad, const std::vector<LedPanel>& lights,
                     const std::optional<IndentPlacement>& indent = std::nullopt,
                     const std::map<std::string, SurfaceMaterial>& materials = default_materials());

/// Indenter resting on the sensing face above (x, y): cylinder axis along the
/// pad width, lowest point touching the undeformed face.
Indenter default_indenter(const GelPadSpec& pad, IndenterKind kind, const Vec3d& dims, double x = 0.0,
                          double y = 0.0);

/// Sensing face of a generated pad in scene coordinates.
TriMesh sensing_face(const GelPad& pad);

/// Re-aims the camera and resizes the mirror for the current pad surface.
void fit_mirror_to_pad(Scene& scene);

}  // namespace finsim
