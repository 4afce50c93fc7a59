#include "finsim/scene.hpp"

#include <cmath>

namespace finsim {

namespace {

void scene_require(bool cond, const std::string& what) { require(cond, ErrorCode::SceneInvalid, what); }

bool unit(const Vec3d& v) { return std::abs(v.norm() - 1.0) <= 1e-9; }

Rgb clamp01(const Rgb& c) { return c.max(0.0).min(1.0); }

}  // namespace

void validate(const Rect& r) {
  scene_require(unit(r.normal) && unit(r.axis_u), "rectangle axes must be unit length");
  scene_require(std::abs(r.normal.dot(r.axis_u)) <= 1e-9, "rectangle axis must lie in its plane");
  scene_require((r.half_extents.array() > 0).all(), "rectangle half extents must be positive");
}

std::string_view to_string(LedPlacement p) { return p == LedPlacement::Bottom ? "bottom" : "top"; }

LedPlacement parse_led_placement(std::string_view name) {
  if (name == "bottom") return LedPlacement::Bottom;
  if (name == "top") return LedPlacement::Top;
  throw Error(ErrorCode::ParseError, "unknown LED placement '" + std::string(name) + "'");
}

void validate(const LedPanel& p) {
  scene_require(unit(p.normal), "LED panel normal must be unit length");
  scene_require((p.half_extents.array() > 0).all(), "LED panel half extents must be positive");
  scene_require(p.tilt_deg >= 0.0 && p.tilt_deg < 180.0, "LED tilt must lie in [0, 180) degrees");
  scene_require(p.radiant_scale >= 0.0 && std::isfinite(p.radiant_scale), "LED radiant scale must be non-negative");
  validate(p.rect());
}

LedPanel make_led_panel(const GelPadSpec& pad, LedPlacement placement, double tilt_deg, double radiant_scale) {
  require(tilt_deg >= 0.0 && tilt_deg < 180.0, ErrorCode::InvalidArgument, "LED tilt must lie in [0, 180) degrees");
  const double th = deg_to_rad(tilt_deg);
  const double sign = placement == LedPlacement::Bottom ? 1.0 : -1.0;
  LedPanel p;
  p.placement = placement;
  p.tilt_deg = tilt_deg;
  p.radiant_scale = radiant_scale;
  p.center = Vec3d(0.0, -sign * (pad.length / 2.0 + 6.0), sensing_height(pad, 0.0, 0.0) - pad.thickness - 4.0);
  p.normal = Vec3d(0.0, sign * std::cos(th), std::sin(th));
  p.axis_u = Vec3d::UnitX();
  p.half_extents = Vec2d(0.3 * pad.width, 2.5);
  return p;
}

std::string_view to_string(MaterialKind k) {
  switch (k) {
    case MaterialKind::Lambertian: return "lambertian";
    case MaterialKind::MirrorSpecular: return "mirror_specular";
    case MaterialKind::CoatedFlake: return "coated_flake";
    case MaterialKind::FluorescentEmissive: return "fluorescent_emissive";
  }
  return "?";
}

MaterialKind parse_material_kind(std::string_view name) {
  for (auto k : {MaterialKind::Lambertian, MaterialKind::MirrorSpecular, MaterialKind::CoatedFlake,
                 MaterialKind::FluorescentEmissive})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::ParseError, "unknown material kind '" + std::string(name) + "'");
}

void validate(const SurfaceMaterial& m) {
  scene_require((m.albedo >= 0.0).all() && (m.albedo <= 1.0).all(), "albedo components must lie in [0, 1]");
  scene_require(m.specular_fraction >= 0.0 && m.specular_fraction <= 1.0, "specular fraction must lie in [0, 1]");
  scene_require(m.roughness >= 0.0 && m.roughness <= 1.0, "roughness must lie in [0, 1]");
  if (m.kind != MaterialKind::MirrorSpecular)
    scene_require((m.albedo + m.specular_fraction <= 1.0 + 1e-12).all(),
                  "albedo + specular fraction exceeds 1 (energy conservation)");
  if (m.kind == MaterialKind::FluorescentEmissive) {
    scene_require(m.paint.has_value(), "fluorescent material needs a paint");
    validate(*m.paint);
  }
}

std::map<std::string, SurfaceMaterial> default_materials() {
  std::map<std::string, SurfaceMaterial> t;
  t["coating"] = {MaterialKind::CoatedFlake, Rgb::Constant(0.6), 0.2, 0.3, std::nullopt};
  t["mirror"] = {MaterialKind::MirrorSpecular, Rgb::Constant(0.9), 0.0, 0.0, std::nullopt};
  t["wall"] = {MaterialKind::Lambertian, Rgb::Constant(0.05), 0.0, 0.0, std::nullopt};
  for (auto preset : {PaintPreset::Red, PaintPreset::Green}) {
    FluorescentMaterial paint = make_paint_preset(preset);
    const Rgb albedo = clamp01(spectrum_to_rgb(paint.base_reflectance));
    t[std::string(to_string(preset)) + "_paint"] = {MaterialKind::FluorescentEmissive, albedo, 0.0, 0.0, paint};
  }
  return t;
}

void validate(const RenderSettings& r) {
  scene_require(r.samples_per_pixel >= 1, "samples per pixel must be at least 1");
  scene_require(r.max_depth >= 1, "max depth must be at least 1");
  scene_require(r.rr_start_depth >= 0, "Russian roulette start depth must be non-negative");
  scene_require(r.exposure > 0.0 && std::isfinite(r.exposure), "exposure must be positive");
}

void validate(const Scene& s) {
  scene_require(s.camera.hfov_deg > 10.0 && s.camera.hfov_deg <= 170.0, "camera FOV must lie in (10, 170] degrees");
  scene_require(s.camera.width > 0 && s.camera.height > 0, "image dimensions must be positive");
  const Vec3d f = s.camera.look_at - s.camera.position;
  scene_require(f.norm() > 0.0 && f.normalized().cross(s.camera.up).norm() > 1e-6,
                "camera look direction must be non-zero and not parallel to up");
  validate(s.render);
  for (const auto& [name, m] : s.materials) {
    try {
      validate(m);
    } catch (const Error& e) {
      throw Error(ErrorCode::SceneInvalid, "material '" + name + "': " + e.what());
    }
  }
  const auto known = [&](const std::string& id) { return s.materials.count(id) > 0; };
  if (s.gel_surface.triangle_count() > 0)
    scene_require(known(s.gel_material), "gel material '" + s.gel_material + "' is not in the material table");
  if (s.mirror) {
    validate(s.mirror->rect);
    scene_require(s.mirror->reflectance >= 0.0 && s.mirror->reflectance <= 1.0, "mirror reflectance outside [0, 1]");
  }
  for (const auto& strip : s.paint_strips) {
    validate(strip.rect);
    scene_require(known(strip.material), "paint strip material '" + strip.material + "' is not in the material table");
    scene_require(s.materials.at(strip.material).kind == MaterialKind::FluorescentEmissive,
                  "paint strip material '" + strip.material + "' is not fluorescent");
  }
  for (const auto& p : s.led_panels) validate(p);
  for (const auto& p : s.panels) {
    validate(p.rect);
    scene_require(known(p.material), "panel material '" + p.material + "' is not in the material table");
    scene_require((p.emission >= 0.0).all() && p.emission.isFinite().all(), "panel emission must be non-negative");
  }
  for (Eigen::Index t = 0; t < s.gel_surface.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k)
      scene_require(s.gel_surface.triangles(k, t) >= 0 && s.gel_surface.triangles(k, t) < s.gel_surface.vertex_count(),
                    "gel surface index out of range");
}

TriMesh sensing_face(const GelPad& pad) { return select_group(pad.surface, kSensingFace); }

Indenter default_indenter(const GelPadSpec& pad, IndenterKind kind, const Vec3d& dims, double x, double y) {
  Indenter ind{kind, dims, {}};
  validate(ind);
  ind.pose.position = Vec3d(x, y, sensing_height(pad, x, y) + ind.reach());
  return ind;
}

void fit_mirror_to_pad(Scene& s) {
  if (!s.mirror || s.gel_surface.vertex_count() == 0) return;
  const double zm = s.mirror->rect.center.z();
  const Vec3d cam = s.camera.position;
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(1e300), hi = Eigen::Vector2d::Constant(-1e300);
  Vec3d centroid = Vec3d::Zero();
  for (Eigen::Index v = 0; v < s.gel_surface.vertex_count(); ++v) {
    const Vec3d p = s.gel_surface.vertices.col(v);
    centroid += p;
    const Vec3d virt(p.x(), p.y(), 2.0 * zm - p.z());
    const double t = (zm - cam.z()) / (virt.z() - cam.z());
    const Vec2d hit = (cam + t * (virt - cam)).head<2>();
    lo = lo.cwiseMin(hit);
    hi = hi.cwiseMax(hit);
  }
  centroid /= static_cast<double>(s.gel_surface.vertex_count());
  const Vec2d mid = 0.5 * (lo + hi);
  s.mirror->rect.center = Vec3d(mid.x(), mid.y(), zm);
  s.mirror->rect.normal = Vec3d::UnitZ();
  s.mirror->rect.axis_u = Vec3d::UnitX();
  s.mirror->rect.half_extents = 0.5 * (hi - lo) * 1.1 + Vec2d::Constant(1.0);
  s.camera.look_at = Vec3d(centroid.x(), centroid.y(), 2.0 * zm - centroid.z());
}

Scene assemble_scene(const GelPadSpec& pad, const std::vector<LedPanel>& lights,
                     const std::optional<IndentPlacement>& indent,
                     const std::map<std::string, SurfaceMaterial>& materials) {
  validate(pad);
  Scene s;
  s.pad = pad;
  s.materials = materials;
  s.led_panels = lights;
  s.indent = indent;

  const GelPad gel = generate_gelpad(pad);
  s.gel_surface = sensing_face(gel);
  s.gel_material = "coating";

  const double apex = sensing_height(pad, 0.0, 0.0);
  s.camera.position = Vec3d(0.0, -pad.length / 2.0 - 5.0, apex - pad.length / 4.0 - 0.5);
  s.camera.up = Vec3d::UnitY();
  s.camera.hfov_deg = 120.0;
  s.camera.width = 320;
  s.camera.height = 240;

  Mirror m;
  m.rect.center = Vec3d(0.0, 0.0, s.camera.position.z() - 12.0);
  m.reflectance = 0.9;
  s.mirror = m;
  fit_mirror_to_pad(s);

  // Strips on the long side walls, emitting into the pad.
  const double edge = sensing_point(pad, 1.0, 0.0).z();
  for (int side = 0; side < 2; ++side) {
    const double sx = side == 0 ? -1.0 : 1.0;
    PaintStrip strip;
    strip.side = side == 0 ? StripSide::Left : StripSide::Right;
    strip.material = side == 0 ? "red_paint" : "green_paint";
    strip.rect.center = Vec3d(sx * pad.width / 2.0, 0.0, edge - pad.thickness / 2.0);
    strip.rect.normal = Vec3d(-sx, 0.0, 0.0);
    strip.rect.axis_u = Vec3d::UnitY();
    strip.rect.half_extents = Vec2d(pad.length / 2.0, pad.thickness / 2.0);
    s.paint_strips.push_back(strip);
  }

  if (indent) {
    const Vec3d c = indent->indenter.pose.position;
    s.probe_point = Vec3d(c.x(), c.y(), sensing_height(pad, c.x(), c.y()));
  } else {
    s.probe_point = Vec3d(0.0, 0.0, apex);
  }
  validate(s);
  return s;
}

}  // namespace finsim
