#include "finsim/deform.hpp"
#include "finsim/mesh_io.hpp"
#include "finsim/meshconvert.hpp"
#include "finsim/scene_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace finsim;

namespace {

GelPadSpec coarse_pad(PadFamily family = PadFamily::Flat) {
  GelPadSpec pad;
  pad.family = family;
  pad.cells_u = 20;
  pad.cells_v = 40;
  pad.cells_w = 2;
  return pad;
}

Scene indented_scene() {
  const GelPadSpec pad = coarse_pad();
  const Indenter ind = default_indenter(pad, IndenterKind::Cylinder, Vec3d(10.0, 40.0, 0.0));
  Scene s = assemble_scene(pad, {make_led_panel(pad, LedPlacement::Bottom, 30.0)}, IndentPlacement{ind, 1.0});
  apply_indentation(s);
  return s;
}

std::filesystem::path temp_dir() {
  auto d = std::filesystem::temp_directory_path() / "finsim_scene_io_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("scene JSON round-trips losslessly") {
  Scene s = indented_scene();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  s.camera.hfov_deg = 97.0 + u(rng);
  s.led_panels[0].radiant_scale = 1.0 + u(rng) * 1e-3;
  s.render.seed = 0xfedcba9876543210ULL;
  s.render.exposure = std::exp(u(rng));
  s.materials["coating"].roughness = 0.3 + 1e-13;

  const std::string text = scene_to_json(s);
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  const Scene back = scene_from_json(text);
  CHECK(scene_to_json(back) == text);
  CHECK(back.camera.hfov_deg == s.camera.hfov_deg);
  CHECK(back.led_panels[0].radiant_scale == s.led_panels[0].radiant_scale);
  CHECK(back.render.seed == s.render.seed);
  CHECK(back.render.exposure == s.render.exposure);
  CHECK(back.materials.at("coating").roughness == s.materials.at("coating").roughness);
  CHECK(back.deformation_source == "approximate-deformer");
  REQUIRE(back.gel_surface.vertices.cols() == s.gel_surface.vertices.cols());
  CHECK((back.gel_surface.vertices.array() == s.gel_surface.vertices.array()).all());
  CHECK((back.probe_point.array() == s.probe_point.array()).all());
  CHECK(back.materials.at("red_paint").paint.has_value());
  CHECK(back.materials.at("red_paint").paint->base_reflectance.values() ==
        s.materials.at("red_paint").paint->base_reflectance.values());
}

TEST_CASE("scene files on disk and bowed mirrors") {
  Scene s = indented_scene();
  s.mirror->deflection = 2.0;
  const auto path = temp_dir() / "scene.json";
  write_scene(path.string(), s);
  const Scene back = read_scene(path.string());
  REQUIRE(back.mirror.has_value());
  REQUIRE(back.mirror->mesh.has_value());
  CHECK(back.mirror->mesh->triangle_count() > 0);
  CHECK(back.mirror->mesh->vertices.row(2).minCoeff() == doctest::Approx(s.mirror->rect.center.z() - 2.0));
}

TEST_CASE("malformed scene files are rejected") {
  const std::string good = scene_to_json(indented_scene());
  auto code_of = [](const std::string& text) {
    try {
      scene_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of("{ not json") == ErrorCode::ParseError);
  CHECK(code_of("[]") == ErrorCode::ParseError);
  std::string wrong_version = good;
  wrong_version.replace(wrong_version.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  CHECK(code_of(wrong_version) == ErrorCode::ParseError);
  std::string bad_spp = good;
  bad_spp.replace(bad_spp.find("\"samples_per_pixel\": 64"), 23, "\"samples_per_pixel\": 0");
  CHECK(code_of(bad_spp) == ErrorCode::SceneInvalid);
  std::string missing_material = good;
  missing_material.replace(missing_material.find("\"material\": \"coating\""), 21, "\"material\": \"nothing\"");
  CHECK(code_of(missing_material) == ErrorCode::SceneInvalid);
}

TEST_CASE("external FEM gel surfaces are imported and tagged") {
  const GelPadSpec pad = coarse_pad();
  const GelPad gel = generate_gelpad(pad);
  HexMesh deformed = gel.volume;
  deformed.displacements = Points3d::Zero(3, deformed.node_count());
  for (Eigen::Index n = 0; n < deformed.node_count(); ++n) {
    const Vec3d p = deformed.nodes.col(n);
    const double r2 = p.head<2>().squaredNorm();
    if (p.z() > -1e-9) (*deformed.displacements)(2, n) = -0.8 * std::exp(-r2 / 20.0);
  }
  const auto path = temp_dir() / "deformed.neutral";
  {
    std::ofstream out(path);
    write_neutral(out, deformed, "external-fem");
  }
  const TriMesh face = import_external_gel(path.string());
  CHECK(face.triangle_count() == sensing_face(gel).triangle_count());
  CHECK(face.vertices.row(2).minCoeff() == doctest::Approx(-0.8).epsilon(0.05));

  Scene s = assemble_scene(pad, {make_led_panel(pad, LedPlacement::Bottom, 30.0)});
  s.external_mesh = "deformed.neutral";
  const auto scene_path = temp_dir() / "external.json";
  write_scene(scene_path.string(), s);
  const Scene back = read_scene(scene_path.string());
  CHECK(back.deformation_source == "external-fem");
  CHECK(back.gel_surface.triangle_count() == face.triangle_count());
}
