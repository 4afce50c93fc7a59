#include "finsim/scene_io.hpp"

#include "finsim/error.hpp"
#include "finsim/mesh_io.hpp"
#include "finsim/meshconvert.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace finsim {

using nlohmann::json;

namespace {

json vec(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <int N>
Eigen::Matrix<double, N, 1> get_vec(const json& j, const char* key) {
  const json& a = j.at(key);
  require(a.is_array() && a.size() == N, ErrorCode::ParseError,
          std::string("'") + key + "' must be an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = a[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json rect_json(const Rect& r) {
  return {{"center", vec(r.center)}, {"normal", vec(r.normal)}, {"axis_u", vec(r.axis_u)},
          {"half_extents", vec(r.half_extents)}};
}

Rect rect_from(const json& j) {
  return {get_vec<3>(j, "center"), get_vec<3>(j, "normal"), get_vec<3>(j, "axis_u"), get_vec<2>(j, "half_extents")};
}

json spectrum_json(const SampledSpectrum& s) {
  return {{"lambda_min", s.grid().lambda_min},
          {"lambda_max", s.grid().lambda_max},
          {"step", s.grid().step},
          {"values", vec(s.values())}};
}

SampledSpectrum spectrum_from(const json& j) {
  const SpectralGrid g{j.at("lambda_min").get<double>(), j.at("lambda_max").get<double>(), j.at("step").get<double>()};
  validate(g);
  const auto values = j.at("values").get<std::vector<double>>();
  require(static_cast<int>(values.size()) == g.size(), ErrorCode::ParseError, "spectrum length does not match its grid");
  return SampledSpectrum(g, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

json lobe_json(const SkewCauchyParams& p) {
  return {{"lambda0", p.lambda0}, {"gamma", p.gamma}, {"omega", p.omega}, {"height", p.height}};
}

SkewCauchyParams lobe_from(const json& j) {
  return {j.at("lambda0").get<double>(), j.at("gamma").get<double>(), j.at("omega").get<double>(),
          j.at("height").get<double>()};
}

json material_json(const SurfaceMaterial& m) {
  json j = {{"kind", to_string(m.kind)},
            {"albedo", vec(m.albedo.matrix())},
            {"specular_fraction", m.specular_fraction},
            {"roughness", m.roughness}};
  if (m.paint) {
    const auto& p = *m.paint;
    j["paint"] = {{"name", p.name},
                  {"absorption", lobe_json(p.absorption)},
                  {"emission", lobe_json(p.emission)},
                  {"stokes_shift", p.stokes_shift},
                  {"conversion_efficiency", p.conversion_efficiency},
                  {"base_reflectance", spectrum_json(p.base_reflectance)}};
  }
  return j;
}

SurfaceMaterial material_from(const json& j) {
  SurfaceMaterial m;
  m.kind = parse_material_kind(j.at("kind").get<std::string>());
  m.albedo = get_vec<3>(j, "albedo").array();
  m.specular_fraction = j.value("specular_fraction", 0.0);
  m.roughness = j.value("roughness", 0.3);
  if (j.contains("paint") && !j["paint"].is_null()) {
    const json& p = j["paint"];
    FluorescentMaterial f;
    f.name = p.value("name", "");
    f.absorption = lobe_from(p.at("absorption"));
    f.emission = lobe_from(p.at("emission"));
    f.stokes_shift = p.value("stokes_shift", 0.0);
    f.conversion_efficiency = p.value("conversion_efficiency", 0.035);
    f.base_reflectance = spectrum_from(p.at("base_reflectance"));
    m.paint = f;
  }
  return m;
}

json led_json(const LedPanel& p) {
  return {{"center", vec(p.center)},
          {"normal", vec(p.normal)},
          {"axis_u", vec(p.axis_u)},
          {"half_extents", vec(p.half_extents)},
          {"emission", spectrum_json(p.emission)},
          {"radiant_scale", p.radiant_scale},
          {"tilt_deg", p.tilt_deg},
          {"placement", to_string(p.placement)}};
}

LedPanel led_from(const json& j) {
  LedPanel p;
  p.center = get_vec<3>(j, "center");
  p.normal = get_vec<3>(j, "normal");
  p.axis_u = get_vec<3>(j, "axis_u");
  p.half_extents = get_vec<2>(j, "half_extents");
  if (j.contains("emission")) p.emission = spectrum_from(j["emission"]);
  p.radiant_scale = j.value("radiant_scale", 1.0);
  p.tilt_deg = j.value("tilt_deg", 30.0);
  p.placement = parse_led_placement(j.value("placement", "bottom"));
  return p;
}

StripSide parse_side(const std::string& s) {
  if (s == "left") return StripSide::Left;
  if (s == "right") return StripSide::Right;
  throw Error(ErrorCode::ParseError, "strip side must be 'left' or 'right', got '" + s + "'");
}

json scene_json(const Scene& s) {
  json j;
  j["schema_version"] = kSceneSchemaVersion;
  const auto res = Eigen::Vector3i(s.pad.cells_u, s.pad.cells_v, s.pad.cells_w);
  j["pad"] = {{"family", to_string(s.pad.family)},
              {"width", s.pad.width},
              {"length", s.pad.length},
              {"thickness", s.pad.thickness},
              {"cyl_radius", s.pad.cyl_radius},
              {"ellipsoid_radii", vec(s.pad.ellipsoid_radii)},
              {"cells", {res[0], res[1], res[2]}}};
  j["gel"] = {{"material", s.gel_material},
              {"source", s.external_mesh.empty() ? "generated" : "external-fem"},
              {"mesh", s.external_mesh}};
  j["camera"] = {{"position", vec(s.camera.position)}, {"look_at", vec(s.camera.look_at)},
                 {"up", vec(s.camera.up)},             {"hfov_deg", s.camera.hfov_deg},
                 {"width", s.camera.width},            {"height", s.camera.height}};
  if (s.mirror) {
    j["mirror"] = {{"rect", rect_json(s.mirror->rect)},
                   {"reflectance", s.mirror->reflectance},
                   {"deflection", s.mirror->deflection}};
  } else {
    j["mirror"] = nullptr;
  }
  j["paint_strips"] = json::array();
  for (const auto& p : s.paint_strips)
    j["paint_strips"].push_back(
        {{"rect", rect_json(p.rect)}, {"material", p.material}, {"side", p.side == StripSide::Left ? "left" : "right"}});
  j["led_panels"] = json::array();
  for (const auto& p : s.led_panels) j["led_panels"].push_back(led_json(p));
  j["panels"] = json::array();
  for (const auto& p : s.panels)
    j["panels"].push_back({{"rect", rect_json(p.rect)}, {"material", p.material}, {"emission", vec(p.emission.matrix())}});
  if (s.indent) {
    const Indenter& ind = s.indent->indenter;
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot.push_back(ind.pose.rotation(r, c));
    j["indent"] = {{"kind", to_string(ind.kind)},
                   {"dims", vec(ind.dims)},
                   {"position", vec(ind.pose.position)},
                   {"rotation", rot},
                   {"depth", s.indent->depth}};
  } else {
    j["indent"] = nullptr;
  }
  j["materials"] = json::object();
  for (const auto& [name, m] : s.materials) j["materials"][name] = material_json(m);
  j["render"] = {{"samples_per_pixel", s.render.samples_per_pixel},
                 {"max_depth", s.render.max_depth},
                 {"rr_start_depth", s.render.rr_start_depth},
                 {"seed", s.render.seed},
                 {"exposure", s.render.exposure}};
  j["probe_point"] = vec(s.probe_point);
  return j;
}

Scene scene_from(const json& j) {
  require(j.is_object(), ErrorCode::ParseError, "scene file must hold a JSON object");
  const int version = j.at("schema_version").get<int>();
  require(version == kSceneSchemaVersion, ErrorCode::ParseError,
          "unsupported scene schema_version " + std::to_string(version));
  Scene s;
  const json& pad = j.at("pad");
  s.pad.family = parse_pad_family(pad.at("family").get<std::string>());
  s.pad.width = pad.at("width").get<double>();
  s.pad.length = pad.at("length").get<double>();
  s.pad.thickness = pad.at("thickness").get<double>();
  s.pad.cyl_radius = pad.value("cyl_radius", s.pad.cyl_radius);
  if (pad.contains("ellipsoid_radii")) s.pad.ellipsoid_radii = get_vec<3>(pad, "ellipsoid_radii");
  if (pad.contains("cells")) {
    const auto cells = pad["cells"].get<std::vector<int>>();
    require(cells.size() == 3, ErrorCode::ParseError, "'cells' must hold three counts");
    s.pad.cells_u = cells[0];
    s.pad.cells_v = cells[1];
    s.pad.cells_w = cells[2];
  }
  const json& gel = j.at("gel");
  s.gel_material = gel.value("material", "coating");
  if (gel.value("source", "generated") == "external-fem") {
    s.external_mesh = gel.at("mesh").get<std::string>();
    require(!s.external_mesh.empty(), ErrorCode::ParseError, "external-fem gel needs a mesh path");
  }
  const json& cam = j.at("camera");
  s.camera.position = get_vec<3>(cam, "position");
  s.camera.look_at = get_vec<3>(cam, "look_at");
  s.camera.up = get_vec<3>(cam, "up");
  s.camera.hfov_deg = cam.at("hfov_deg").get<double>();
  s.camera.width = cam.at("width").get<int>();
  s.camera.height = cam.at("height").get<int>();
  if (j.contains("mirror") && !j["mirror"].is_null()) {
    Mirror m;
    m.rect = rect_from(j["mirror"].at("rect"));
    m.reflectance = j["mirror"].value("reflectance", 0.9);
    m.deflection = j["mirror"].value("deflection", 0.0);
    s.mirror = m;
  }
  for (const auto& p : j.value("paint_strips", json::array()))
    s.paint_strips.push_back({rect_from(p.at("rect")), p.at("material").get<std::string>(),
                              parse_side(p.value("side", "left"))});
  for (const auto& p : j.value("led_panels", json::array())) s.led_panels.push_back(led_from(p));
  for (const auto& p : j.value("panels", json::array()))
    s.panels.push_back({rect_from(p.at("rect")), p.at("material").get<std::string>(), get_vec<3>(p, "emission").array()});
  if (j.contains("indent") && !j["indent"].is_null()) {
    const json& in = j["indent"];
    Indenter ind = make_indenter(parse_indenter_kind(in.at("kind").get<std::string>()), get_vec<3>(in, "dims"));
    ind.pose.position = get_vec<3>(in, "position");
    if (in.contains("rotation")) {
      const auto r = in["rotation"].get<std::vector<double>>();
      require(r.size() == 9, ErrorCode::ParseError, "'rotation' must hold 9 numbers (row-major)");
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) ind.pose.rotation(a, b) = r[static_cast<std::size_t>(3 * a + b)];
    }
    s.indent = IndentPlacement{ind, in.at("depth").get<double>()};
  }
  s.materials.clear();
  for (const auto& [name, m] : j.at("materials").items()) s.materials[name] = material_from(m);
  if (j.contains("render")) {
    const json& r = j["render"];
    s.render.samples_per_pixel = r.value("samples_per_pixel", s.render.samples_per_pixel);
    s.render.max_depth = r.value("max_depth", s.render.max_depth);
    s.render.rr_start_depth = r.value("rr_start_depth", s.render.rr_start_depth);
    s.render.seed = r.value("seed", s.render.seed);
    s.render.exposure = r.value("exposure", s.render.exposure);
  }
  if (j.contains("probe_point")) s.probe_point = get_vec<3>(j, "probe_point");
  return s;
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  // nlohmann writes the shortest decimal that reads back to the same double
  // (at most 17 significant digits).
  return scene_json(scene).dump(2) + "\n";
}

TriMesh import_external_gel(const std::string& path) {
  const std::filesystem::path p(path);
  HexMesh hex;
  if (p.extension() == ".inp") {
    hex = read_fem_deck(path).hex;
  } else {
    NeutralMesh n = read_neutral(path);
    if (n.surface) {
      TriMesh surface = *n.surface;
      compute_normals(surface);
      return surface;
    }
    hex = std::move(n.hex);
  }
  HexMesh rest = hex;
  rest.displacements.reset();
  const TriMesh undeformed = hex_to_surface(rest);
  TriMesh deformed = hex.displacements ? hex_to_surface(apply_displacements(hex)) : undeformed;
  require(deformed.triangle_count() == undeformed.triangle_count(), ErrorCode::DegenerateInput,
          "deformed and rest surfaces differ in size");
  deformed.groups = classify_sensing_face(undeformed);
  TriMesh face = select_group(deformed, kSensingFace);
  require(face.triangle_count() > 0, ErrorCode::DegenerateInput, "no upward-facing sensing face found in '" + path + "'");
  return face;
}

void rebuild_geometry(Scene& scene, const std::filesystem::path& base_dir, const DeformSettings& deform) {
  if (!scene.external_mesh.empty()) {
    std::filesystem::path p(scene.external_mesh);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    scene.gel_surface = import_external_gel(p.string());
    scene.deformation_source = "external-fem";
  } else {
    scene.gel_surface = sensing_face(generate_gelpad(scene.pad));
    scene.deformation_source = "none";
    if (scene.indent && scene.indent->depth > 0.0) apply_indentation(scene, deform);
  }
  if (scene.mirror) {
    scene.mirror->mesh.reset();
    if (scene.mirror->deflection > 0.0) scene.mirror->mesh = deform_mirror(scene.mirror->rect, scene.mirror->deflection);
  }
}

Scene scene_from_json(const std::string& text, const std::filesystem::path& base_dir, const DeformSettings& deform) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scene JSON: ") + e.what());
  }
  Scene s;
  try {
    s = scene_from(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scene JSON: ") + e.what());
  }
  rebuild_geometry(s, base_dir, deform);
  validate(s);
  return s;
}

void write_scene(const std::string& path, const Scene& scene) {
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << scene_to_json(scene);
  require(out.good(), ErrorCode::IoError, "failed writing '" + path + "'");
}

Scene read_scene(const std::string& path, const DeformSettings& deform) {
  std::ifstream in(path);
  require(in.is_open(), ErrorCode::IoError, "cannot open scene '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str(), std::filesystem::path(path).parent_path(), deform);
}

}  // namespace finsim
