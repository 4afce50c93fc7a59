#include "finsim/render.hpp"

#include "finsim/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

namespace finsim {

// ---------------------------------------------------------------------------
// Emission texture

EmissionTexture::EmissionTexture(const Rect& strip, const FluorescentMaterial& paint,
                                 const std::vector<LedPanel>& sources)
    : strip_(strip) {
  require(!sources.empty(), ErrorCode::InvalidArgument, "emission texture needs at least one blue source");
  validate(strip);
  color_ = normalized_color(spectrum_to_rgb(sample_model(paint.emission)));
  for (const auto& s : sources) {
    const double absorbed = absorbed_fraction(s.emission, paint.absorption);
    sources_.push_back({s.center, s.normal.normalized(), s.half_extents.mean(),
                        s.radiant_scale * absorbed * paint.conversion_efficiency});
  }
}

Rgb EmissionTexture::radiance(const Vec3d& x) const {
  double irradiance = 0.0;
  for (const auto& s : sources_) {
    const Vec3d r = x - s.center;
    const double d = r.norm();
    const double cosine = d > 0.0 ? std::max(0.0, s.normal.dot(r) / d) : 1.0;
    const double q = d / s.d0;
    irradiance += s.weight * cosine / (1.0 + q * q);
  }
  return irradiance * color_;
}

Rgb EmissionTexture::mean_radiance(int n) const {
  Rgb sum = Rgb::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sum += radiance(strip_.point(-1.0 + (2.0 * i + 1.0) / n, -1.0 + (2.0 * j + 1.0) / n));
  return sum / static_cast<double>(n * n);
}

EmissionTexture fluorescent_emission_texture(const Rect& strip, const FluorescentMaterial& paint,
                                             const std::vector<LedPanel>& blue_sources) {
  return EmissionTexture(strip, paint, blue_sources);
}

Rgb led_radiance(const LedPanel& panel) {
  return panel.radiant_scale * normalized_color(spectrum_to_rgb(panel.emission));
}

// ---------------------------------------------------------------------------
// Render scene

RenderScene::RenderScene(const Scene& scene) : scene_(scene) {
  validate(scene_);
  std::map<std::string, int> ids;
  for (const auto& [name, m] : scene_.materials) {
    ids[name] = static_cast<int>(materials_.size());
    materials_.push_back(m);
  }

  const TriMesh& gel = scene_.gel_surface;
  Eigen::Index nv = gel.vertex_count(), nt = gel.triangle_count();
  if (scene_.mirror) {
    mirror_material_ = static_cast<int>(materials_.size());
    materials_.push_back({MaterialKind::MirrorSpecular, Rgb::Constant(scene_.mirror->reflectance), 0.0, 0.0, {}});
  }
  const TriMesh* mirror_mesh = scene_.mirror && scene_.mirror->mesh ? &*scene_.mirror->mesh : nullptr;
  if (mirror_mesh) {
    nv += mirror_mesh->vertex_count();
    nt += mirror_mesh->triangle_count();
  }
  vertices_.resize(3, nv);
  triangles_.resize(3, nt);
  vertices_.leftCols(gel.vertex_count()) = gel.vertices;
  triangles_.leftCols(gel.triangle_count()) = gel.triangles;
  const int gel_id = gel.triangle_count() > 0 ? ids.at(scene_.gel_material) : -1;
  tri_material_.assign(static_cast<std::size_t>(gel.triangle_count()), gel_id);
  tri_gel_.assign(static_cast<std::size_t>(gel.triangle_count()), 1);
  if (mirror_mesh) {
    vertices_.rightCols(mirror_mesh->vertex_count()) = mirror_mesh->vertices;
    triangles_.rightCols(mirror_mesh->triangle_count()) =
        mirror_mesh->triangles.array() + static_cast<std::int32_t>(gel.vertex_count());
    tri_material_.resize(static_cast<std::size_t>(nt), mirror_material_);
    tri_gel_.resize(static_cast<std::size_t>(nt), 0);
  }
  bvh_ = Bvh(vertices_, triangles_);
  rebuild_rectangles();
}

void RenderScene::set_lights(const std::vector<LedPanel>& panels) {
  for (const auto& p : panels) validate(p);
  scene_.led_panels = panels;
  rebuild_rectangles();
}

void RenderScene::rebuild_rectangles() {
  rects_.clear();
  textures_.clear();
  lights_.clear();
  light_cdf_.clear();
  std::map<std::string, int> ids;
  for (const auto& [name, m] : scene_.materials) ids[name] = static_cast<int>(ids.size());

  if (scene_.mirror && !scene_.mirror->mesh) {
    Rectangle r;
    r.rect = scene_.mirror->rect;
    r.material = mirror_material_;
    rects_.push_back(r);
  }
  for (const auto& strip : scene_.paint_strips) {
    Rectangle r;
    r.rect = strip.rect;
    r.material = ids.at(strip.material);
    const auto& paint = scene_.materials.at(strip.material).paint;
    if (paint && !scene_.led_panels.empty()) {
      r.texture = static_cast<int>(textures_.size());
      textures_.emplace_back(strip.rect, *paint, scene_.led_panels);
    }
    rects_.push_back(r);
  }
  for (const auto& panel : scene_.panels) {
    Rectangle r;
    r.rect = panel.rect;
    r.material = ids.at(panel.material);
    r.emission = panel.emission;
    rects_.push_back(r);
  }
  for (const auto& led : scene_.led_panels) {
    Rectangle r;
    r.rect = led.rect();
    r.emission = led_radiance(led);
    rects_.push_back(r);
  }

  double total = 0.0;
  for (int i = 0; i < static_cast<int>(rects_.size()); ++i) {
    const auto& r = rects_[static_cast<std::size_t>(i)];
    const Rgb mean = r.texture >= 0 ? textures_[static_cast<std::size_t>(r.texture)].mean_radiance() : r.emission;
    const double power = mean.max(0.0).sum() * r.rect.area();
    if (power <= 0.0) continue;
    lights_.push_back(i);
    total += power;
    light_cdf_.push_back(total);
  }
  for (double& c : light_cdf_) c /= total;
}

std::optional<RenderScene::SurfaceHit> RenderScene::intersect(const Ray& ray, double t_max) const {
  std::optional<SurfaceHit> best;
  TriangleHit th;
  if (bvh_.intersect(ray, 0.0, t_max, th)) {
    const auto tri = triangles_.col(th.triangle);
    const Vec3d a = vertices_.col(tri[0]), b = vertices_.col(tri[1]), c = vertices_.col(tri[2]);
    const Vec3d n = (b - a).cross(c - a).normalized();
    best = SurfaceHit{th.t, ray.origin + th.t * ray.dir, n, tri_material_[static_cast<std::size_t>(th.triangle)],
                      -1, tri_gel_[static_cast<std::size_t>(th.triangle)] != 0};
    t_max = th.t;
  }
  for (int i = 0; i < static_cast<int>(rects_.size()); ++i) {
    const Rect& r = rects_[static_cast<std::size_t>(i)].rect;
    const double denom = ray.dir.dot(r.normal);
    if (std::abs(denom) < 1e-14) continue;
    const double t = (r.center - ray.origin).dot(r.normal) / denom;
    if (t <= 0.0 || t >= t_max) continue;
    const Vec3d p = ray.origin + t * ray.dir;
    const Vec3d local = p - r.center;
    if (std::abs(local.dot(r.axis_u)) > r.half_extents.x() || std::abs(local.dot(r.axis_v())) > r.half_extents.y())
      continue;
    best = SurfaceHit{t, p, r.normal, rects_[static_cast<std::size_t>(i)].material, i, false};
    t_max = t;
  }
  return best;
}

bool RenderScene::occluded(const Vec3d& from, const Vec3d& to) const {
  const Ray ray{from, to - from};
  constexpr double t_max = 1.0 - 1e-7;
  if (bvh_.occluded(ray, 0.0, t_max)) return true;
  for (const auto& rr : rects_) {
    const Rect& r = rr.rect;
    const double denom = ray.dir.dot(r.normal);
    if (std::abs(denom) < 1e-14) continue;
    const double t = (r.center - ray.origin).dot(r.normal) / denom;
    if (t <= 1e-9 || t >= t_max) continue;
    const Vec3d local = ray.origin + t * ray.dir - r.center;
    if (std::abs(local.dot(r.axis_u)) <= r.half_extents.x() && std::abs(local.dot(r.axis_v())) <= r.half_extents.y())
      return true;
  }
  return false;
}

Rgb RenderScene::emitted(int rectangle, const Vec3d& point, const Vec3d& toward) const {
  const auto& r = rects_[static_cast<std::size_t>(rectangle)];
  if (r.rect.normal.dot(toward) <= 0.0) return Rgb::Zero();
  if (r.texture >= 0) return textures_[static_cast<std::size_t>(r.texture)].radiance(point);
  return r.emission;
}

// ---------------------------------------------------------------------------
// Path tracer

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t pixel) : rng_(splitmix64(splitmix64(seed) ^ pixel)) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

void orthonormal_basis(const Vec3d& n, Vec3d& t, Vec3d& b) {
  const double sign = std::copysign(1.0, n.z());
  const double a = -1.0 / (sign + n.z());
  const double c = n.x() * n.y() * a;
  t = Vec3d(1.0 + sign * n.x() * n.x() * a, sign * c, -sign * n.x());
  b = Vec3d(c, sign + n.y() * n.y() * a, -n.y());
}

Vec3d cosine_sample(const Vec3d& n, double u1, double u2) {
  Vec3d t, b;
  orthonormal_basis(n, t, b);
  const double r = std::sqrt(u1), phi = 2.0 * kPi * u2;
  return (r * std::cos(phi) * t + r * std::sin(phi) * b + std::sqrt(std::max(0.0, 1.0 - u1)) * n).normalized();
}

Vec3d reflect(const Vec3d& d, const Vec3d& n) { return d - 2.0 * d.dot(n) * n; }

double phong_exponent(double roughness) {
  const double r = std::max(roughness, 0.01);
  return std::max(1.0, 2.0 / (r * r) - 2.0);
}

/// Diffuse plus normalised Phong lobe around the mirror direction.
struct Bsdf {
  const SurfaceMaterial& m;
  Vec3d n;   ///< shading normal on the side of wo
  Vec3d wo;  ///< toward the previous vertex

  double glossy_weight() const { return m.kind == MaterialKind::CoatedFlake ? m.specular_fraction : 0.0; }

  Rgb eval(const Vec3d& wi) const {
    if (n.dot(wi) <= 0.0) return Rgb::Zero();
    Rgb f = m.albedo / kPi;
    const double ks = glossy_weight();
    if (ks > 0.0) {
      const double e = phong_exponent(m.roughness);
      const double c = std::max(0.0, wi.dot(reflect(-wo, n)));
      f += ks * (e + 2.0) / (2.0 * kPi) * std::pow(c, e);
    }
    return f;
  }

  double diffuse_probability() const {
    const double kd = m.albedo.mean(), ks = glossy_weight();
    return kd + ks > 0.0 ? kd / (kd + ks) : 1.0;
  }

  double pdf(const Vec3d& wi) const {
    const double cosine = n.dot(wi);
    if (cosine <= 0.0) return 0.0;
    const double pd = diffuse_probability();
    double p = pd * cosine / kPi;
    if (pd < 1.0) {
      const double e = phong_exponent(m.roughness);
      const double c = std::max(0.0, wi.dot(reflect(-wo, n)));
      p += (1.0 - pd) * (e + 1.0) / (2.0 * kPi) * std::pow(c, e);
    }
    return p;
  }

  std::optional<Vec3d> sample(Sampler& s) const {
    const double u0 = s.next(), u1 = s.next(), u2 = s.next();
    if (u0 < diffuse_probability()) return cosine_sample(n, u1, u2);
    const double e = phong_exponent(m.roughness);
    const Vec3d r = reflect(-wo, n);
    Vec3d t, b;
    orthonormal_basis(r, t, b);
    const double cos_a = std::pow(u1, 1.0 / (e + 1.0));
    const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
    const double phi = 2.0 * kPi * u2;
    const Vec3d wi = (sin_a * std::cos(phi) * t + sin_a * std::sin(phi) * b + cos_a * r).normalized();
    if (n.dot(wi) <= 0.0) return std::nullopt;
    return wi;
  }
};

/// Uniform sampling of the solid angle a rectangle subtends (Urena, Fajardo
/// and King 2013), so a light sample's weight is bounded by the solid angle.
class SphericalRect {
 public:
  SphericalRect(const Rect& r, const Vec3d& o) : o_(o) {
    const Vec3d ex = 2.0 * r.half_extents.x() * r.axis_u;
    const Vec3d ey = 2.0 * r.half_extents.y() * r.axis_v();
    const Vec3d corner = r.center - 0.5 * ex - 0.5 * ey;
    exl_ = ex.norm();
    eyl_ = ey.norm();
    x_ = ex / exl_;
    y_ = ey / eyl_;
    z_ = x_.cross(y_);
    const Vec3d d = corner - o;
    z0_ = d.dot(z_);
    if (z0_ > 0.0) {
      z_ = -z_;
      z0_ = -z0_;
    }
    x0_ = d.dot(x_);
    y0_ = d.dot(y_);
    x1_ = x0_ + exl_;
    y1_ = y0_ + eyl_;
    const Vec3d v00(x0_, y0_, z0_), v01(x0_, y1_, z0_), v10(x1_, y0_, z0_), v11(x1_, y1_, z0_);
    const Vec3d n0 = v00.cross(v10).normalized(), n1 = v10.cross(v11).normalized();
    const Vec3d n2 = v11.cross(v01).normalized(), n3 = v01.cross(v00).normalized();
    const auto angle = [](const Vec3d& a, const Vec3d& b) { return std::acos(std::clamp(-a.dot(b), -1.0, 1.0)); };
    const double g0 = angle(n0, n1), g1 = angle(n1, n2), g2 = angle(n2, n3), g3 = angle(n3, n0);
    b0_ = n0.z();
    b1_ = n2.z();
    k_ = 2.0 * kPi - g2 - g3;
    s_ = g0 + g1 - k_;
  }

  double solid_angle() const { return s_; }

  std::optional<Vec3d> sample(double u, double v) const {
    if (!(s_ > 1e-12) || z0_ > -1e-12) return std::nullopt;
    const double au = u * s_ + k_;
    const double fu = (std::cos(au) * b0_ - b1_) / std::sin(au);
    double cu = std::copysign(1.0, fu) / std::sqrt(fu * fu + b0_ * b0_);
    cu = std::clamp(cu, -1.0 + 1e-15, 1.0 - 1e-15);
    const double xu = std::clamp(-(cu * z0_) / std::sqrt(1.0 - cu * cu), x0_, x1_);
    const double d = std::sqrt(xu * xu + z0_ * z0_);
    const double h0 = y0_ / std::sqrt(d * d + y0_ * y0_);
    const double h1 = y1_ / std::sqrt(d * d + y1_ * y1_);
    const double hv = h0 + v * (h1 - h0), hv2 = hv * hv;
    const double yv = hv2 < 1.0 - 1e-12 ? hv * d / std::sqrt(1.0 - hv2) : y1_;
    if (!std::isfinite(xu) || !std::isfinite(yv)) return std::nullopt;
    return o_ + xu * x_ + std::clamp(yv, y0_, y1_) * y_ + z0_ * z_;
  }

 private:
  Vec3d o_, x_, y_, z_;
  double exl_, eyl_, z0_, x0_, y0_, x1_, y1_, b0_, b1_, k_, s_;
};

constexpr double kRayOffset = 1e-5;

struct Tracer {
  const RenderScene& scene;
  const RenderSettings& settings;

  int pick_light(double u) const {
    const auto& cdf = scene.light_cdf();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }

  Rgb direct(const Bsdf& bsdf, const Vec3d& origin, Sampler& s) const {
    const auto& lights = scene.lights();
    const double u0 = s.next(), u1 = s.next(), u2 = s.next();
    if (lights.empty()) return Rgb::Zero();
    const int k = pick_light(u0);
    const double pmf = scene.light_cdf()[static_cast<std::size_t>(k)] -
                       (k > 0 ? scene.light_cdf()[static_cast<std::size_t>(k - 1)] : 0.0);
    const int ri = lights[static_cast<std::size_t>(k)];
    const Rect& rect = scene.rectangles()[static_cast<std::size_t>(ri)].rect;
    if (rect.normal.dot(origin - rect.center) <= 0.0) return Rgb::Zero();
    const SphericalRect sr(rect, origin);
    const auto y = sr.sample(u1, u2);
    if (!y) return Rgb::Zero();
    const Vec3d wi = (*y - origin).normalized();
    const double cos_x = bsdf.n.dot(wi);
    if (cos_x <= 0.0) return Rgb::Zero();
    const Rgb le = scene.emitted(ri, *y, -wi);
    if ((le <= 0.0).all()) return Rgb::Zero();
    if (scene.occluded(origin, *y)) return Rgb::Zero();
    return bsdf.eval(wi) * le * (cos_x * sr.solid_angle() / pmf);
  }

  Rgb radiance(Ray ray, Sampler& s) const {
    Rgb result = Rgb::Zero();
    Rgb beta = Rgb::Ones();
    bool specular = true;
    for (int depth = 0;; ++depth) {
      const auto hit = scene.intersect(ray);
      if (!hit) break;
      const Vec3d wo = -ray.dir;
      if (hit->rectangle >= 0 && specular) result += beta * scene.emitted(hit->rectangle, hit->point, wo);
      if (depth >= settings.max_depth || hit->material < 0) break;

      const SurfaceMaterial& m = scene.materials()[static_cast<std::size_t>(hit->material)];
      const Vec3d n = hit->normal.dot(wo) >= 0.0 ? hit->normal : Vec3d(-hit->normal);
      const Vec3d origin = hit->point + kRayOffset * n;
      if (m.kind == MaterialKind::MirrorSpecular) {
        beta *= m.albedo;
        ray = {origin, reflect(ray.dir, n)};
        specular = true;
      } else {
        const Bsdf bsdf{m, n, wo};
        result += beta * direct(bsdf, origin, s);
        const auto wi = bsdf.sample(s);
        if (!wi) break;
        const double pdf = bsdf.pdf(*wi);
        if (pdf <= 0.0) break;
        beta *= bsdf.eval(*wi) * (n.dot(*wi) / pdf);
        ray = {origin, *wi};
        specular = false;
      }
      if (depth + 1 >= settings.rr_start_depth) {
        const double q = std::min(0.95, beta.maxCoeff());
        if (q <= 0.0 || s.next() >= q) break;
        beta /= q;
      }
    }
    return result;
  }
};

struct CameraFrame {
  Vec3d position, forward, right, up;
  double tan_h, tan_v;
  int width, height;

  explicit CameraFrame(const Camera& c) : position(c.position), width(c.width), height(c.height) {
    forward = (c.look_at - c.position).normalized();
    right = forward.cross(c.up).normalized();
    up = right.cross(forward);
    tan_h = std::tan(deg_to_rad(c.hfov_deg) / 2.0);
    tan_v = tan_h * c.height / c.width;
  }

  Ray ray(double px, double py) const {
    const double sx = 2.0 * px / width - 1.0;
    const double sy = 1.0 - 2.0 * py / height;
    return {position, (forward + sx * tan_h * right + sy * tan_v * up).normalized()};
  }
};

}  // namespace

int render_thread_count() {
  if (const char* env = std::getenv("FINSIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min<long>(n, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Ray camera_ray(const Camera& camera, double px, double py) { return CameraFrame(camera).ray(px, py); }

std::optional<Vec2d> project(const Camera& camera, const Vec3d& point) {
  const CameraFrame f(camera);
  const Vec3d local = point - f.position;
  const double z = local.dot(f.forward);
  if (z <= 0.0) return std::nullopt;
  const double sx = local.dot(f.right) / (z * f.tan_h);
  const double sy = local.dot(f.up) / (z * f.tan_v);
  return Vec2d((sx + 1.0) * f.width / 2.0, (1.0 - sy) * f.height / 2.0);
}

std::optional<Vec2d> image_of(const Scene& scene, const Vec3d& point) {
  if (!scene.mirror) return project(scene.camera, point);
  const Rect& m = scene.mirror->rect;
  const Vec3d virt = point - 2.0 * (point - m.center).dot(m.normal) * m.normal;
  return project(scene.camera, virt);
}

Eigen::Vector2i probe_pixel(const Scene& scene) {
  const auto p = image_of(scene, scene.probe_point);
  require(p.has_value(), ErrorCode::OutOfBounds, "probe point is behind the camera");
  return {static_cast<int>(std::floor(p->x())), static_cast<int>(std::floor(p->y()))};
}

Eigen::Array<bool, Eigen::Dynamic, 1> pad_mask(const RenderScene& scene) {
  const Camera& cam = scene.scene().camera;
  const CameraFrame frame(cam);
  Eigen::Array<bool, Eigen::Dynamic, 1> mask(static_cast<Eigen::Index>(cam.width) * cam.height);
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      Ray ray = frame.ray(x + 0.5, y + 0.5);
      bool gel = false;
      for (int bounce = 0; bounce < 4; ++bounce) {
        const auto hit = scene.intersect(ray);
        if (!hit) break;
        if (hit->gel) {
          gel = true;
          break;
        }
        if (hit->material < 0 ||
            scene.materials()[static_cast<std::size_t>(hit->material)].kind != MaterialKind::MirrorSpecular)
          break;
        const Vec3d n = hit->normal.dot(ray.dir) <= 0.0 ? hit->normal : Vec3d(-hit->normal);
        ray = {hit->point + kRayOffset * n, reflect(ray.dir, n)};
      }
      mask[static_cast<Eigen::Index>(y) * cam.width + x] = gel;
    }
  return mask;
}

Image render(const RenderScene& scene, const RenderSettings& settings, int threads) {
  validate(settings);
  const Camera& cam = scene.scene().camera;
  const CameraFrame frame(cam);
  Image image(cam.width, cam.height);
  const Tracer tracer{scene, settings};

  constexpr int kTile = 16;
  const int tiles_x = (cam.width + kTile - 1) / kTile;
  const int tiles_y = (cam.height + kTile - 1) / kTile;
  const int tile_count = tiles_x * tiles_y;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int tile = next++; tile < tile_count; tile = next++) {
      const int x0 = (tile % tiles_x) * kTile, y0 = (tile / tiles_x) * kTile;
      for (int y = y0; y < std::min(y0 + kTile, cam.height); ++y)
        for (int x = x0; x < std::min(x0 + kTile, cam.width); ++x) {
          const auto pixel = static_cast<std::uint64_t>(image.index(x, y));
          Sampler s(settings.seed, pixel);
          Rgb sum = Rgb::Zero();
          for (int k = 0; k < settings.samples_per_pixel; ++k) {
            const double jx = s.next(), jy = s.next();
            sum += tracer.radiance(frame.ray(x + jx, y + jy), s);
          }
          image.set(x, y, settings.exposure * sum / settings.samples_per_pixel);
        }
    }
  };
  const int n = std::max(1, std::min(threads > 0 ? threads : render_thread_count(), tile_count));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  require(image.pixels.allFinite(), ErrorCode::ImageNaN, "renderer produced a non-finite pixel");
  return image;
}

Image render(const Scene& scene) {
  const RenderScene rs(scene);
  return render(rs, scene.render);
}

}  // namespace finsim
