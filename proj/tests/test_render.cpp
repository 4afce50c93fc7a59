#include "finsim/bvh.hpp"
#include "finsim/image.hpp"
#include "finsim/render.hpp"
#include "finsim/scene.hpp"

#include "render_scenes.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace finsim;

namespace {

Scene small_sensor_scene(int width = 80, int height = 60, int spp = 8) {
  GelPadSpec pad;
  pad.cells_u = 18;
  pad.cells_v = 35;
  pad.cells_w = 2;
  Scene s = assemble_scene(pad, {make_led_panel(pad, LedPlacement::Bottom, 30.0)});
  s.camera.width = width;
  s.camera.height = height;
  s.render.samples_per_pixel = spp;
  return s;
}

Eigen::Array3d weighted_centroid(const Image& img) {
  const Eigen::ArrayXd lum = luminance_map(img);
  double sx = 0, sy = 0, w = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const double l = lum[img.index(x, y)];
      sx += l * (x + 0.5);
      sy += l * (y + 0.5);
      w += l;
    }
  return {sx / w, sy / w, w};
}

}  // namespace

TEST_CASE("probe intensity of uniform images") {
  Image white(20, 20);
  white.pixels.setOnes();
  CHECK(probe_intensity(white, 10, 10) == doctest::Approx(1.0).epsilon(1e-15));
  Image red(20, 20);
  red.pixels.row(0).setOnes();
  CHECK(probe_intensity(red, 10, 10) == doctest::Approx(0.2126).epsilon(1e-15));
  CHECK_THROWS_AS(probe_intensity(red, 2, 10), Error);
  try {
    probe_intensity(red, 10, 17);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
}

TEST_CASE("raw float images round-trip and PNGs are written") {
  Image img(7, 5);
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 4.0f);
  for (Eigen::Index i = 0; i < img.pixels.size(); ++i) img.pixels.data()[i] = u(rng);
  std::stringstream ss;
  write_raw(ss, img);
  CHECK(ss.str().size() == 8 + 12 + 7 * 5 * 3 * 4);
  CHECK(static_cast<unsigned char>(ss.str()[8]) == 7);
  const Image back = read_raw(ss);
  CHECK(back.width == 7);
  CHECK(back.height == 5);
  CHECK((back.pixels == img.pixels).all());

  std::stringstream bad("NOTRAW00");
  CHECK_THROWS_AS(read_raw(bad), Error);

  const auto path = std::filesystem::temp_directory_path() / "finsim_test.png";
  write_png(path.string(), img, 0.5);
  std::ifstream in(path, std::ios::binary);
  char sig[8];
  in.read(sig, 8);
  CHECK(std::string(sig + 1, 3) == "PNG");
  std::filesystem::remove(path);
  CHECK(srgb_encode(0.0) == 0.0);
  CHECK(srgb_encode(1.0) == doctest::Approx(1.0));
  CHECK(srgb_encode(2.0) == doctest::Approx(1.0));
}

TEST_CASE("BVH closest hit agrees with brute force") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0), small(-1.0, 1.0);
  const int n = 600;
  Points3d v(3, 3 * n);
  TriIndices t(3, n);
  for (int i = 0; i < n; ++i) {
    const Vec3d c(u(rng), u(rng), u(rng));
    for (int k = 0; k < 3; ++k) {
      v.col(3 * i + k) = c + Vec3d(small(rng), small(rng), small(rng));
      t(k, i) = 3 * i + k;
    }
  }
  const Bvh bvh(v, t);
  CHECK(bvh.depth() < 40);
  int hits = 0;
  for (int r = 0; r < 2000; ++r) {
    const Ray ray{Vec3d(u(rng), u(rng), u(rng)), Vec3d(small(rng), small(rng), small(rng)).normalized()};
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (int i = 0; i < n; ++i) {
      // Moller-Trumbore written independently of the BVH's leaf test.
      const Vec3d a = v.col(3 * i), b = v.col(3 * i + 1), c = v.col(3 * i + 2);
      const Mat3d m = (Mat3d() << b - a, c - a, -ray.dir).finished();
      if (std::abs(m.determinant()) < 1e-14) continue;
      const Vec3d x = m.inverse() * (ray.origin - a);
      if (x[0] >= 0 && x[1] >= 0 && x[0] + x[1] <= 1 && x[2] > 0 && x[2] < best) {
        best = x[2];
        best_id = i;
      }
    }
    TriangleHit hit;
    const bool found = bvh.intersect(ray, 0.0, 1e300, hit);
    REQUIRE(found == (best_id >= 0));
    if (found) {
      ++hits;
      CHECK(hit.triangle == best_id);
      CHECK(hit.t == doctest::Approx(best).epsilon(1e-9));
      CHECK(bvh.occluded(ray, 0.0, best * 1.0001));
      CHECK_FALSE(bvh.occluded(ray, 0.0, best * 0.9999));
    }
  }
  CHECK(hits > 100);
}

TEST_CASE("emission texture: peak under the source, red paint, linear in radiant scale") {
  Rect strip;
  strip.center = Vec3d(0, 0, 0);
  strip.normal = Vec3d::UnitZ();
  strip.axis_u = Vec3d::UnitX();
  strip.half_extents = Vec2d(30, 5);
  LedPanel led;
  led.center = Vec3d(7, 1, -6);
  led.normal = Vec3d::UnitZ();
  led.axis_u = Vec3d::UnitX();
  const auto red = make_paint_preset(PaintPreset::Red);
  const EmissionTexture tex = fluorescent_emission_texture(strip, red, {led});

  const Vec3d foot(7, 1, 0);
  const double peak = luminance(tex.radiance(foot));
  CHECK(peak > 0.0);
  for (double x = -30; x <= 30; x += 0.5)
    for (double y = -5; y <= 5; y += 0.5) CHECK(luminance(tex.radiance(Vec3d(x, y, 0))) <= peak);

  const Rgb c = tex.radiance(foot);
  CHECK(c[0] > c[1]);
  CHECK(c[0] > c[2]);
  CHECK(tex.color().maxCoeff() == doctest::Approx(1.0));

  LedPanel brighter = led;
  brighter.radiant_scale = 2.0;
  const EmissionTexture tex2 = fluorescent_emission_texture(strip, red, {brighter});
  for (double x = -30; x <= 30; x += 3.7) {
    const Vec3d p(x, 2.0, 0.0);
    CHECK(((tex2.radiance(p) - 2.0 * tex.radiance(p)).abs() <= 1e-15 * tex.radiance(p).abs().max(1e-300)).all());
  }
  CHECK_THROWS_AS(fluorescent_emission_texture(strip, red, {}), Error);
}

TEST_CASE("furnace: interior radiance matches the truncated geometric series") {
  Scene s = oracle::furnace_box(0.5, 1.0, 32);
  s.render.samples_per_pixel = 256;
  s.render.max_depth = 8;
  const Image img = render(s);
  const double mean = luminance_map(img).mean();
  const double expected = oracle::furnace_oracle(0.5, 1.0, 8);
  CHECK(std::abs(mean - expected) / expected < 0.02);
  // Every pixel of a furnace carries the same expectation.
  CHECK(luminance_map(img).minCoeff() > 0.6 * expected);

  s.render.max_depth = 1;
  const double shallow = luminance_map(render(s)).mean();
  CHECK(std::abs(shallow - 1.5) / 1.5 < 0.02);
}

TEST_CASE("energy bound: no pixel exceeds L (max_depth + 1)") {
  Scene s = oracle::furnace_box(0.5, 1.0, 24);
  s.render.samples_per_pixel = 32;
  s.render.max_depth = 3;
  const Image img = render(s);
  CHECK(img.pixels.maxCoeff() <= 4.0 + 1e-9);
  CHECK(img.pixels.minCoeff() >= 0.0);

  const Scene sensor = small_sensor_scene(64, 48, 16);
  const Image si = render(sensor);
  CHECK(si.pixels.minCoeff() >= 0.0);
  CHECK(si.pixels.maxCoeff() <= 1.0 * (sensor.render.max_depth + 1));
}

TEST_CASE("mirror image of an emissive patch lands at the reflected position") {
  for (const Vec3d patch : {Vec3d(0.0, 2.0, 6.0), Vec3d(1.5, 3.0, 5.0), Vec3d(-2.0, 1.0, 4.0)}) {
    const Scene s = oracle::mirror_patch_scene(patch);
    const Image img = render(s);
    const auto c = weighted_centroid(img);
    REQUIRE(c[2] > 0.0);
    const auto expected = image_of(s, patch);
    REQUIRE(expected.has_value());
    CHECK(std::hypot(c[0] - expected->x(), c[1] - expected->y()) < 1.0);
  }
}

TEST_CASE("determinism across runs and thread counts") {
  const Scene s = small_sensor_scene(48, 36, 4);
  const RenderScene rs(s);
  const Image a = render(rs, s.render, 1);
  const Image b = render(rs, s.render, 3);
  const Image c = render(rs, s.render, 1);
  CHECK((a.pixels == b.pixels).all());
  CHECK((a.pixels == c.pixels).all());
  RenderSettings other = s.render;
  other.seed = 2;
  CHECK_FALSE((render(rs, other, 1).pixels == a.pixels).all());
}

TEST_CASE("moving lights on a warm scene equals rebuilding the scene") {
  Scene s = small_sensor_scene(40, 30, 2);
  RenderScene warm(s);
  const std::vector<LedPanel> lights = {make_led_panel(s.pad, LedPlacement::Bottom, 70.0)};
  warm.set_lights(lights);
  s.led_panels = lights;
  const RenderScene fresh(s);
  CHECK((render(warm, s.render, 1).pixels == render(fresh, s.render, 1).pixels).all());
}

TEST_CASE("linearity in radiant scale") {
  Scene s = small_sensor_scene(64, 64, 16);
  const Image base = render(s);
  for (auto& led : s.led_panels) led.radiant_scale *= 3.0;
  const Image scaled = render(s);
  const double num = (scaled.pixels - 3.0 * base.pixels).abs().sum();
  const double den = (3.0 * base.pixels).abs().sum();
  REQUIRE(den > 0.0);
  CHECK(num / den < 0.01);
}

TEST_CASE("doubling samples per pixel shrinks the standard error by about 1/sqrt 2") {
  Scene s = small_sensor_scene(24, 18, 4);
  const RenderScene rs(s);
  auto spread = [&](int spp) {
    const int seeds = 16;
    std::vector<Eigen::ArrayXd> lum;
    for (int k = 0; k < seeds; ++k) {
      RenderSettings r = s.render;
      r.samples_per_pixel = spp;
      r.seed = 1000 + static_cast<std::uint64_t>(k);
      lum.push_back(luminance_map(render(rs, r, 1)));
    }
    Eigen::ArrayXd mean = Eigen::ArrayXd::Zero(lum[0].size());
    for (const auto& l : lum) mean += l;
    mean /= seeds;
    Eigen::ArrayXd var = Eigen::ArrayXd::Zero(mean.size());
    for (const auto& l : lum) var += (l - mean).square();
    return std::sqrt(var.sum() / (seeds - 1) / static_cast<double>(mean.size()));
  };
  const double ratio = spread(16) / spread(8);
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.15));
}

TEST_CASE("sensor scene: pad mask, probe pixel, dark without lights") {
  Scene s = small_sensor_scene(160, 120, 4);
  const RenderScene rs(s);
  const auto mask = pad_mask(rs);
  const double fraction = mask.cast<double>().mean();
  CHECK(fraction > 0.05);
  CHECK(fraction < 0.95);
  const Eigen::Vector2i probe = probe_pixel(s);
  REQUIRE(probe.x() >= 0);
  REQUIRE(probe.y() >= 0);
  CHECK(mask[static_cast<Eigen::Index>(probe.y()) * 160 + probe.x()]);

  const Image lit = render(rs, s.render);
  CHECK(probe_intensity(lit, probe.x(), probe.y()) > 0.0);

  s.led_panels.clear();
  const Image dark = render(s);
  CHECK(dark.pixels.maxCoeff() == 0.0);
}

TEST_CASE("project inverts camera rays") {
  Camera cam;
  cam.position = Vec3d(1, 2, 3);
  cam.look_at = Vec3d(4, -1, 0);
  cam.up = Vec3d::UnitZ();
  for (double px : {0.5, 100.25, 319.0})
    for (double py : {3.0, 120.0, 239.5}) {
      const Ray r = camera_ray(cam, px, py);
      const auto p = project(cam, r.origin + 7.0 * r.dir);
      REQUIRE(p.has_value());
      CHECK(p->x() == doctest::Approx(px).epsilon(1e-9));
      CHECK(p->y() == doctest::Approx(py).epsilon(1e-9));
    }
  CHECK_FALSE(project(cam, cam.position - (cam.look_at - cam.position)).has_value());
}
