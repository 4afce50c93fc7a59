#include "finsim/app.hpp"

#include "finsim/error.hpp"
#include "finsim/mesh_io.hpp"
#include "finsim/scene_io.hpp"
#include "finsim/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef FINSIM_VERSION
#define FINSIM_VERSION "0.0.0"
#endif

namespace finsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return FINSIM_VERSION; }

// ---------------------------------------------------------------------------
// Scenes

Scene make_sensor_scene(const SensorConfig& c, const DeformSettings& deform) {
  require(c.light_count == 1 || c.light_count == 2, ErrorCode::InvalidArgument, "light count must be 1 or 2");
  require(c.depth >= 0.0, ErrorCode::InvalidArgument, "indentation depth must be non-negative");
  std::vector<LedPanel> lights = {make_led_panel(c.pad, LedPlacement::Bottom, c.light_angle, c.bottom_radiant_scale)};
  if (c.light_count == 2) lights.push_back(make_led_panel(c.pad, LedPlacement::Top, c.light_angle, c.top_radiant_scale));
  std::optional<IndentPlacement> indent;
  if (c.indenter)
    indent = IndentPlacement{
        default_indenter(c.pad, *c.indenter, c.indenter_dims, c.indenter_xy.x(), c.indenter_xy.y()), c.depth};
  Scene s = assemble_scene(c.pad, lights, indent);
  s.camera.width = c.width;
  s.camera.height = c.height;
  s.render = c.render;
  s.external_mesh = c.external_mesh;
  if (!c.external_mesh.empty())
    rebuild_geometry(s, {}, deform);
  else if (s.indent && s.indent->depth > 0.0)
    apply_indentation(s, deform);
  validate(s);
  return s;
}

std::vector<LedPanel> tilted_lights(const std::vector<LedPanel>& panels, double angle_deg) {
  require(angle_deg >= 0.0 && angle_deg < 180.0, ErrorCode::InvalidArgument, "light angle must lie in [0, 180)");
  std::vector<LedPanel> out = panels;
  const double th = deg_to_rad(angle_deg);
  for (auto& p : out) {
    const double sign = p.placement == LedPlacement::Bottom ? 1.0 : -1.0;
    p.normal = Vec3d(0.0, sign * std::cos(th), std::sin(th));
    p.axis_u = Vec3d::UnitX();
    p.tilt_deg = angle_deg;
  }
  return out;
}

Probe default_probe(const Scene& scene) { return {probe_pixel(scene), 4}; }

// ---------------------------------------------------------------------------
// Sweeps

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::LightAngle: return "light_angle";
    case SweepVariable::LightCount: return "light_count";
    case SweepVariable::GelpadShape: return "gelpad_shape";
    case SweepVariable::IndenterDepth: return "indenter_depth";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  for (auto v : {SweepVariable::LightAngle, SweepVariable::LightCount, SweepVariable::GelpadShape,
                 SweepVariable::IndenterDepth})
    if (to_string(v) == name) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown sweep variable '" + std::string(name) + "'");
}

namespace {

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && std::isfinite(v), ErrorCode::InvalidArgument, "'" + s + "' is not a number");
  return v;
}

bool numeric(SweepVariable v) { return v != SweepVariable::GelpadShape; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string file_stem_for(const std::string& prefix, const std::string& value) {
  std::string s = prefix + "_";
  for (char c : value) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return s;
}

/// Rebuilds a scene for another pad, keeping lights' placement, tilt and
/// scale, the indenter's shape and xy, materials and render settings.
Scene scene_with_pad(const Scene& base, const GelPadSpec& pad) {
  std::vector<LedPanel> lights;
  for (const auto& p : base.led_panels) {
    LedPanel q = make_led_panel(pad, p.placement, p.tilt_deg, p.radiant_scale);
    q.emission = p.emission;
    lights.push_back(q);
  }
  std::optional<IndentPlacement> indent;
  if (base.indent) {
    const Indenter& ind = base.indent->indenter;
    indent = IndentPlacement{
        default_indenter(pad, ind.kind, ind.dims, ind.pose.position.x(), ind.pose.position.y()), base.indent->depth};
    indent->indenter.pose.rotation = ind.pose.rotation;
  }
  Scene s = assemble_scene(pad, lights, indent, base.materials);
  s.camera.width = base.camera.width;
  s.camera.height = base.camera.height;
  s.camera.hfov_deg = base.camera.hfov_deg;
  s.render = base.render;
  rebuild_geometry(s);
  return s;
}

void write_sweep_csv(const fs::path& path, const SweepSpec& spec, const SweepResult& r) {
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot write '" + path.string() + "'");
  if (spec.default_grid) out << "# default angle grid (10-150 deg, step 10)\n";
  const std::string header = spec.variable == SweepVariable::LightAngle ? "angle_deg" : std::string(to_string(spec.variable));
  out << header << ",intensity\n";
  for (const auto& row : r.rows) out << row.value << ',' << format_double(row.intensity) << '\n';
  if (!r.complete) out << "# incomplete: " << r.error << '\n';
}

void write_sweep_svg(const fs::path& path, const SweepSpec& spec, const SweepResult& r) {
  LinePlot plot;
  plot.title = std::string(to_string(spec.variable)) + " sweep";
  plot.x_label = spec.variable == SweepVariable::LightAngle ? "angle (deg)" : std::string(to_string(spec.variable));
  plot.y_label = "intensity";
  PlotSeries series;
  series.label = "probe";
  series.markers = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    series.x.push_back(numeric(spec.variable) ? parse_number(r.rows[i].value) : static_cast<double>(i));
    series.y.push_back(r.rows[i].intensity);
  }
  plot.series.push_back(series);
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << render_svg(plot);
}

}  // namespace

std::vector<std::string> default_angle_grid() {
  std::vector<std::string> v;
  for (int a = 10; a <= 150; a += 10) v.push_back(std::to_string(a));
  return v;
}

void validate(const SweepSpec& spec) {
  require(spec.values.size() >= 2, ErrorCode::InvalidArgument, "a sweep needs at least two values");
  if (numeric(spec.variable)) {
    std::vector<double> v;
    for (const auto& s : spec.values) v.push_back(parse_number(s));
    for (std::size_t i = 1; i < v.size(); ++i)
      require(v[i] >= v[i - 1], ErrorCode::InvalidArgument, "sweep values must be sorted ascending");
    if (spec.variable == SweepVariable::LightAngle)
      for (double a : v) require(a >= 0.0 && a < 180.0, ErrorCode::InvalidArgument, "angles must lie in [0, 180)");
    if (spec.variable == SweepVariable::LightCount)
      for (double a : v) require(a == 1.0 || a == 2.0, ErrorCode::InvalidArgument, "light count must be 1 or 2");
    if (spec.variable == SweepVariable::IndenterDepth) {
      require(spec.base.indent.has_value(), ErrorCode::InvalidArgument, "depth sweep needs an indenter in the scene");
      for (double a : v) require(a >= 0.0, ErrorCode::InvalidArgument, "depths must be non-negative");
    }
  } else {
    for (const auto& s : spec.values) parse_pad_family(s);
  }
  if (spec.variable == SweepVariable::LightAngle)
    require(!spec.base.led_panels.empty(), ErrorCode::InvalidArgument, "angle sweep needs at least one LED panel");
}

SweepResult run_sweep(const SweepSpec& spec, const fs::path& out_dir, int threads) {
  validate(spec);
  fs::create_directories(out_dir);
  SweepResult result;
  const std::string name = spec.variable == SweepVariable::LightAngle ? "sweep_angle" : "sweep_" + std::string(to_string(spec.variable));
  result.csv = out_dir / (name + ".csv");
  result.svg = out_dir / (name + ".svg");
  const std::string prefix = spec.variable == SweepVariable::LightAngle ? "angle" : std::string(to_string(spec.variable));

  // Angle sweeps only move lights, so one BVH serves every item.
  std::optional<RenderScene> warm;
  if (spec.variable == SweepVariable::LightAngle) warm.emplace(spec.base);

  try {
    for (const auto& value : spec.values) {
      Scene item = spec.base;
      switch (spec.variable) {
        case SweepVariable::LightAngle:
          warm->set_lights(tilted_lights(spec.base.led_panels, parse_number(value)));
          break;
        case SweepVariable::LightCount: {
          const double angle = spec.base.led_panels.empty() ? 30.0 : spec.base.led_panels.front().tilt_deg;
          const double scale = spec.base.led_panels.empty() ? 1.0 : spec.base.led_panels.front().radiant_scale;
          item.led_panels = {make_led_panel(item.pad, LedPlacement::Bottom, angle, scale)};
          if (parse_number(value) == 2.0) item.led_panels.push_back(make_led_panel(item.pad, LedPlacement::Top, angle, scale));
          break;
        }
        case SweepVariable::GelpadShape: {
          GelPadSpec pad = spec.base.pad;
          pad.family = parse_pad_family(value);
          item = scene_with_pad(spec.base, pad);
          break;
        }
        case SweepVariable::IndenterDepth:
          item.indent->depth = parse_number(value);
          rebuild_geometry(item);
          break;
      }
      const RenderScene* rs = warm ? &*warm : nullptr;
      std::optional<RenderScene> local;
      if (!rs) rs = &local.emplace(item);
      const Image img = render(*rs, item.render, threads);
      const Probe probe = spec.probe ? *spec.probe : default_probe(item);
      SweepRow row;
      row.value = value;
      row.intensity = probe_intensity(img, probe.pixel.x(), probe.pixel.y(), probe.half_window);
      const std::string stem = file_stem_for(prefix, value);
      row.image = stem + ".png";
      row.raw = stem + ".raw";
      write_png((out_dir / row.image).string(), img);
      write_raw((out_dir / row.raw).string(), img);
      result.rows.push_back(row);
    }
  } catch (const std::exception& e) {
    result.complete = false;
    result.error = e.what();
    write_sweep_csv(result.csv, spec, result);
    throw;
  }
  write_sweep_csv(result.csv, spec, result);
  write_sweep_svg(result.svg, spec, result);
  return result;
}

// ---------------------------------------------------------------------------
// Uniformity

double region_cv(const Image& image, const Eigen::Array<bool, Eigen::Dynamic, 1>& mask) {
  require(mask.size() == static_cast<Eigen::Index>(image.width) * image.height, ErrorCode::RegionMaskMismatch,
          "mask size does not match the image");
  const Eigen::ArrayXd lum = luminance_map(image);
  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  for (Eigen::Index i = 0; i < lum.size(); ++i)
    if (mask[i]) {
      sum += lum[i];
      ++n;
    }
  require(n > 1, ErrorCode::RegionMaskMismatch, "pad region is empty");
  const double mean = sum / static_cast<double>(n);
  for (Eigen::Index i = 0; i < lum.size(); ++i)
    if (mask[i]) sum2 += (lum[i] - mean) * (lum[i] - mean);
  require(mean > 0.0, ErrorCode::InvalidArgument, "pad region is black; uniformity is undefined");
  return std::sqrt(sum2 / static_cast<double>(n - 1)) / mean;
}

UniformityReport compare_lights(const Scene& one, const Scene& two, int threads) {
  const RenderScene a(one), b(two);
  const auto ma = pad_mask(a), mb = pad_mask(b);
  require(ma.size() == mb.size() && (ma == mb).all(), ErrorCode::RegionMaskMismatch,
          "the two scenes see different pad regions (" + std::to_string(ma.count()) + " vs " +
              std::to_string(mb.count()) + " pixels)");
  const Image ia = render(a, one.render, threads);
  const Image ib = render(b, two.render, threads);
  UniformityReport r;
  r.region_pixels = static_cast<long>(ma.count());
  r.cv_one = region_cv(ia, ma);
  r.cv_two = region_cv(ib, mb);
  r.ratio = r.cv_two / r.cv_one;
  const Eigen::ArrayXd la = luminance_map(ia), lb = luminance_map(ib);
  for (Eigen::Index i = 0; i < la.size(); ++i)
    if (ma[i]) {
      r.mean_one += la[i];
      r.mean_two += lb[i];
    }
  r.mean_one /= static_cast<double>(r.region_pixels);
  r.mean_two /= static_cast<double>(r.region_pixels);
  return r;
}

double histogram_chi2(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, int bins) {
  require(a.size() > 0 && a.size() == b.size(), ErrorCode::InvalidArgument, "histograms need equal, non-empty inputs");
  // Fireflies would stretch a min-max range over empty bins; clip at the
  // 99th percentile of the pooled values instead.
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const double lo = pooled.front();
  const double hi = pooled[static_cast<std::size_t>(0.99 * static_cast<double>(pooled.size() - 1))];
  if (hi <= lo) return 0.0;
  Eigen::ArrayXd ha = Eigen::ArrayXd::Zero(bins), hb = Eigen::ArrayXd::Zero(bins);
  auto bin = [&](double v) { return std::clamp(static_cast<int>(bins * (v - lo) / (hi - lo)), 0, bins - 1); };
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    ha[bin(a[i])] += 1.0;
    hb[bin(b[i])] += 1.0;
  }
  ha /= static_cast<double>(a.size());
  hb /= static_cast<double>(b.size());
  double chi = 0.0;
  for (int i = 0; i < bins; ++i)
    if (ha[i] + hb[i] > 0.0) chi += (ha[i] - hb[i]) * (ha[i] - hb[i]) / (ha[i] + hb[i]);
  return 0.5 * chi;
}

Eigen::ArrayXd probe_region(const Image& image, const Probe& p) {
  probe_intensity(image, p.pixel.x(), p.pixel.y(), p.half_window);  // bounds check
  const int n = 2 * p.half_window + 1;
  Eigen::ArrayXd out(n * n);
  int k = 0;
  for (int y = p.pixel.y() - p.half_window; y <= p.pixel.y() + p.half_window; ++y)
    for (int x = p.pixel.x() - p.half_window; x <= p.pixel.x() + p.half_window; ++x)
      out[k++] = luminance(image.at(x, y));
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
  return hex;
}

namespace {

json config_json(const SensorConfig& c) {
  json j;
  j["pad"] = {{"family", to_string(c.pad.family)},
              {"width", c.pad.width},
              {"length", c.pad.length},
              {"thickness", c.pad.thickness},
              {"cyl_radius", c.pad.cyl_radius},
              {"ellipsoid_radii", {c.pad.ellipsoid_radii.x(), c.pad.ellipsoid_radii.y(), c.pad.ellipsoid_radii.z()}},
              {"cells", {c.pad.cells_u, c.pad.cells_v, c.pad.cells_w}}};
  j["light_count"] = c.light_count;
  j["light_angle"] = c.light_angle;
  j["bottom_radiant_scale"] = c.bottom_radiant_scale;
  j["top_radiant_scale"] = c.top_radiant_scale;
  j["indenter"] = c.indenter ? json(std::string(to_string(*c.indenter))) : json(nullptr);
  j["indenter_dims"] = {c.indenter_dims.x(), c.indenter_dims.y(), c.indenter_dims.z()};
  j["indenter_xy"] = {c.indenter_xy.x(), c.indenter_xy.y()};
  j["depth"] = c.depth;
  j["external_mesh"] = c.external_mesh;
  j["render"] = {{"samples_per_pixel", c.render.samples_per_pixel},
                 {"max_depth", c.render.max_depth},
                 {"rr_start_depth", c.render.rr_start_depth},
                 {"seed", c.render.seed},
                 {"exposure", c.render.exposure}};
  j["width"] = c.width;
  j["height"] = c.height;
  return j;
}

SensorConfig config_from(const json& j) {
  SensorConfig c;
  const json& p = j.at("pad");
  c.pad.family = parse_pad_family(p.at("family").get<std::string>());
  c.pad.width = p.at("width").get<double>();
  c.pad.length = p.at("length").get<double>();
  c.pad.thickness = p.at("thickness").get<double>();
  c.pad.cyl_radius = p.at("cyl_radius").get<double>();
  const auto r = p.at("ellipsoid_radii").get<std::vector<double>>();
  const auto cells = p.at("cells").get<std::vector<int>>();
  require(r.size() == 3 && cells.size() == 3, ErrorCode::ParseError, "malformed pad in manifest");
  c.pad.ellipsoid_radii = Vec3d(r[0], r[1], r[2]);
  c.pad.cells_u = cells[0];
  c.pad.cells_v = cells[1];
  c.pad.cells_w = cells[2];
  c.light_count = j.at("light_count").get<int>();
  c.light_angle = j.at("light_angle").get<double>();
  c.bottom_radiant_scale = j.at("bottom_radiant_scale").get<double>();
  c.top_radiant_scale = j.at("top_radiant_scale").get<double>();
  if (j.at("indenter").is_null())
    c.indenter.reset();
  else
    c.indenter = parse_indenter_kind(j["indenter"].get<std::string>());
  const auto d = j.at("indenter_dims").get<std::vector<double>>();
  const auto xy = j.at("indenter_xy").get<std::vector<double>>();
  require(d.size() == 3 && xy.size() == 2, ErrorCode::ParseError, "malformed indenter in manifest");
  c.indenter_dims = Vec3d(d[0], d[1], d[2]);
  c.indenter_xy = Vec2d(xy[0], xy[1]);
  c.depth = j.at("depth").get<double>();
  c.external_mesh = j.at("external_mesh").get<std::string>();
  const json& rs = j.at("render");
  c.render.samples_per_pixel = rs.at("samples_per_pixel").get<int>();
  c.render.max_depth = rs.at("max_depth").get<int>();
  c.render.rr_start_depth = rs.at("rr_start_depth").get<int>();
  c.render.seed = rs.at("seed").get<std::uint64_t>();
  c.render.exposure = rs.at("exposure").get<double>();
  c.width = j.at("width").get<int>();
  c.height = j.at("height").get<int>();
  return c;
}

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::exception& e)
      : std::runtime_error("stage '" + stage + "' failed: " + e.what()) {}
};

template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + name + "': " + e.what());
  } catch (const std::exception& e) {
    throw StageError(name, e);
  }
}

}  // namespace

PipelineResult run_pipeline(const SensorConfig& config, const fs::path& out_dir, int threads) {
  fs::create_directories(out_dir);
  json stages = json::array();

  const GelPad gel = stage("generate", [&] { return generate_gelpad(config.pad); });
  stages.push_back({{"name", "generate"},
                    {"family", to_string(config.pad.family)},
                    {"nodes", gel.volume.node_count()},
                    {"elements", gel.volume.element_count()}});

  const bool external = !config.external_mesh.empty();
  Scene scene = stage(external ? "import" : "indent", [&] { return make_sensor_scene(config); });
  if (external) {
    stages.push_back({{"name", "import"},
                      {"source", "external-fem"},
                      {"mesh", config.external_mesh},
                      {"mesh_digest", file_digest(config.external_mesh)}});
    stages.push_back({{"name", "convert"}, {"sensing_triangles", scene.gel_surface.triangle_count()}});
  } else {
    stages.push_back({{"name", "convert"},
                      {"surface_triangles", gel.surface.triangle_count()},
                      {"sensing_triangles", sensing_face(gel).triangle_count()}});
    json indent = {{"name", "indent"}, {"source", scene.deformation_source}};
    if (scene.indent) {
      indent["indenter"] = to_string(scene.indent->indenter.kind);
      indent["depth"] = scene.indent->depth;
    }
    stages.push_back(indent);
  }

  PipelineResult r;
  r.image = stage("render", [&] {
    const RenderScene rs(scene);
    return render(rs, scene.render, threads);
  });
  stages.push_back({{"name", "render"},
                    {"samples_per_pixel", scene.render.samples_per_pixel},
                    {"max_depth", scene.render.max_depth},
                    {"rr_start_depth", scene.render.rr_start_depth},
                    {"seed", scene.render.seed},
                    {"exposure", scene.render.exposure},
                    {"width", scene.camera.width},
                    {"height", scene.camera.height}});

  r.png = out_dir / "pipeline.png";
  r.raw = out_dir / "pipeline.raw";
  r.scene_file = out_dir / "scene.json";
  r.manifest = out_dir / "manifest.json";
  write_png(r.png.string(), r.image);
  write_raw(r.raw.string(), r.image);
  write_scene(r.scene_file.string(), scene);

  json m;
  m["tool"] = "finsim";
  m["version"] = tool_version();
  m["command"] = "pipeline";
  m["deformation_source"] = scene.deformation_source;
  m["seed"] = scene.render.seed;
  m["config"] = config_json(config);
  m["stages"] = stages;
  m["outputs"] = {{"image", r.png.filename().string()},
                  {"raw", r.raw.filename().string()},
                  {"scene", r.scene_file.filename().string()}};
  m["digests"] = {{r.png.filename().string(), file_digest(r.png)},
                  {r.raw.filename().string(), file_digest(r.raw)},
                  {r.scene_file.filename().string(), file_digest(r.scene_file)}};
  std::ofstream out(r.manifest);
  require(out.is_open(), ErrorCode::IoError, "cannot write manifest");
  out << m.dump(2) << '\n';
  r.scene = std::move(scene);
  return r;
}

PipelineResult replay_pipeline(const fs::path& manifest, const fs::path& out_dir, int threads) {
  std::ifstream in(manifest);
  require(in.is_open(), ErrorCode::IoError, "cannot read manifest '" + manifest.string() + "'");
  json m;
  try {
    m = json::parse(in);
    require(m.value("command", "") == "pipeline", ErrorCode::ParseError, "not a pipeline manifest");
    return run_pipeline(config_from(m.at("config")), out_dir, threads);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

}  // namespace finsim
