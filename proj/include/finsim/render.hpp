#pragma once

#include "finsim/bvh.hpp"
#include "finsim/image.hpp"
#include "finsim/scene.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace finsim {

/// Emission of a fluorescent strip lit by blue panels. The blue irradiance
/// at a strip point is estimated as radiant_scale * cos / (1 + (d/d0)^2),
/// with d the distance to the panel centre and d0 the mean half extent, and
/// converted with the paint's absorbed fraction and efficiency.
class EmissionTexture {
 public:
  EmissionTexture(const Rect& strip, const FluorescentMaterial& paint, const std::vector<LedPanel>& sources);

  Rgb radiance(const Vec3d& x) const;
  const Rgb& color() const { return color_; }
  /// Mean radiance over an n x n grid of the strip.
  Rgb mean_radiance(int n = 8) const;

 private:
  struct Source {
    Vec3d center, normal;
    double d0, weight;  ///< weight = radiant_scale * absorbed fraction * efficiency
  };
  Rect strip_;
  Rgb color_;
  std::vector<Source> sources_;
};

EmissionTexture fluorescent_emission_texture(const Rect& strip, const FluorescentMaterial& paint,
                                             const std::vector<LedPanel>& blue_sources);

/// Radiance of an LED panel: radiant_scale times its normalised colour.
Rgb led_radiance(const LedPanel& panel);

/// Render-ready form of a Scene. Geometry (gel, bowed mirror) lives in a
/// BVH built once; rectangles and lights are cheap to rebuild, so a sweep
/// over light poses calls set_lights on one instance.
class RenderScene {
 public:
  explicit RenderScene(const Scene& scene);

  /// Replaces the LED panels and recomputes strip emission.
  void set_lights(const std::vector<LedPanel>& panels);
  const Scene& scene() const { return scene_; }
  const Bvh& bvh() const { return bvh_; }

  struct Rectangle {
    Rect rect;
    int material = -1;  ///< -1 absorbs
    Rgb emission = Rgb::Zero();
    int texture = -1;
  };

  struct SurfaceHit {
    double t;
    Vec3d point;
    Vec3d normal;  ///< geometric, unit, as stored (not flipped)
    int material;  ///< -1 absorbs
    int rectangle = -1;
    bool gel = false;
  };

  std::optional<SurfaceHit> intersect(const Ray& ray, double t_max = std::numeric_limits<double>::infinity()) const;
  bool occluded(const Vec3d& from, const Vec3d& to) const;

  /// Emitted radiance leaving a rectangle point toward `toward`.
  Rgb emitted(int rectangle, const Vec3d& point, const Vec3d& toward) const;

  const std::vector<Rectangle>& rectangles() const { return rects_; }
  const std::vector<SurfaceMaterial>& materials() const { return materials_; }
  const std::vector<int>& lights() const { return lights_; }
  const std::vector<double>& light_cdf() const { return light_cdf_; }

 private:
  void rebuild_rectangles();

  Scene scene_;
  std::vector<SurfaceMaterial> materials_;
  int mirror_material_ = -1;
  Points3d vertices_;
  TriIndices triangles_;
  std::vector<int> tri_material_;
  std::vector<char> tri_gel_;
  Bvh bvh_;
  std::vector<Rectangle> rects_;
  std::vector<EmissionTexture> textures_;
  std::vector<int> lights_;
  std::vector<double> light_cdf_;
};

/// Number of worker threads: FINSIM_THREADS if set and positive, otherwise
/// the hardware concurrency.
int render_thread_count();

/// Path-traced image. Output depends only on the scene and settings, never
/// on the thread count. Throws ImageNaN if a non-finite pixel appears.
Image render(const RenderScene& scene, const RenderSettings& settings, int threads = 0);
Image render(const Scene& scene);

/// Primary ray through the centre of pixel (x, y).
Ray camera_ray(const Camera& camera, double px, double py);

/// Pixel position of a world point, or nullopt if behind the camera.
std::optional<Vec2d> project(const Camera& camera, const Vec3d& point);

/// Pixel where the camera sees `point`: through the mirror when the scene
/// has one, directly otherwise.
std::optional<Vec2d> image_of(const Scene& scene, const Vec3d& point);

/// Pixels whose centre ray reaches the gel surface (after the mirror).
Eigen::Array<bool, Eigen::Dynamic, 1> pad_mask(const RenderScene& scene);

/// Probe pixel for the scene's probe point.
Eigen::Vector2i probe_pixel(const Scene& scene);

}  // namespace finsim
