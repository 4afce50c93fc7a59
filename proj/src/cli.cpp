#include "finsim/app.hpp"

#include "finsim/error.hpp"
#include "finsim/geometry.hpp"
#include "finsim/mesh_io.hpp"
#include "finsim/meshconvert.hpp"
#include "finsim/scene_io.hpp"
#include "finsim/spectra.hpp"
#include "finsim/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace finsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> spp, width, height, max_depth, rr_start;
  std::optional<double> exposure;
  std::string out_dir = ".";
  std::string scene;
  std::optional<int> threads;
};

void apply_overrides(const GlobalOptions& g, Scene& s) {
  if (g.seed) s.render.seed = *g.seed;
  if (g.spp) s.render.samples_per_pixel = *g.spp;
  if (g.max_depth) s.render.max_depth = *g.max_depth;
  if (g.rr_start) s.render.rr_start_depth = *g.rr_start;
  if (g.exposure) s.render.exposure = *g.exposure;
  if (g.width) s.camera.width = *g.width;
  if (g.height) s.camera.height = *g.height;
  validate(s);
}

void apply_overrides(const GlobalOptions& g, SensorConfig& c) {
  if (g.seed) c.render.seed = *g.seed;
  if (g.spp) c.render.samples_per_pixel = *g.spp;
  if (g.max_depth) c.render.max_depth = *g.max_depth;
  if (g.rr_start) c.render.rr_start_depth = *g.rr_start;
  if (g.exposure) c.render.exposure = *g.exposure;
  if (g.width) c.width = *g.width;
  if (g.height) c.height = *g.height;
  validate(c.render);
}

int threads_of(const GlobalOptions& g) { return g.threads.value_or(0); }

fs::path out_path(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  require(out.good(), ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  if (expected && v.size() != expected)
    throw UsageError(what + " needs " + std::to_string(expected) + " comma-separated numbers");
  return v;
}

// ---------------------------------------------------------------------------
// fit

json params_json(const SkewCauchyParams& p) {
  return {{"lambda0", p.lambda0}, {"gamma", p.gamma}, {"omega", p.omega}, {"height", p.height}};
}

/// Fewer samples than this are fitted as scattered points (filter-wheel
/// measurements) rather than resampled onto the spectral grid.
constexpr std::size_t kDenseSamples = 16;

struct FitOutput {
  FitResult fit;
  std::vector<double> wavelengths, values;
};

void write_report(const fs::path& path, const FitOutput& f) {
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot write '" + path.string() + "'");
  char buf[160];
  std::snprintf(buf, sizeof buf, " residual=%.6g iterations=%d converged=%s", f.fit.residual, f.fit.iterations,
                f.fit.converged ? "true" : "false");
  out << "# " << describe(f.fit.params) << buf << '\n';
  out << "wavelength_nm,measured,fitted\n";
  for (std::size_t i = 0; i < f.wavelengths.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g,%.17g,%.17g\n", f.wavelengths[i], f.values[i],
                  eval_skew_cauchy(f.fit.params, f.wavelengths[i]));
    out << buf;
  }
}

std::string overlay_svg(const FitOutput& f, const std::string& title) {
  PlotSeries meas{"measured", f.wavelengths, f.values, "#d62728", true, false};
  PlotSeries model{"fitted model", {}, {}, "#1f77b4", false, true};
  const SpectralGrid grid = SpectralGrid::standard();
  const double lo = std::min(grid.lambda_min, f.wavelengths.front());
  const double hi = std::max(grid.lambda_max, f.wavelengths.back());
  for (double w = lo; w <= hi + 1e-9; w += 1.0) {
    model.x.push_back(w);
    model.y.push_back(eval_skew_cauchy(f.fit.params, w));
  }
  return render_svg(LinePlot{title, "wavelength (nm)", "relative intensity", {model, meas}});
}

int cmd_fit(const GlobalOptions& g, const std::string& csv, const std::string& paint_name, bool free_peak,
            std::ostream& out) {
  MeasuredSpectrum m;
  {
    std::ifstream in(csv);
    require(in.is_open(), ErrorCode::IoError, "cannot read '" + csv + "'");
    std::stringstream text;
    text << in.rdbuf();
    std::string line;
    int rows = 0;
    std::istringstream lines(text.str());
    while (std::getline(lines, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') ++rows;
    if (rows <= 1) throw UsageError("'" + csv + "' has no samples");
    std::istringstream again(text.str());
    m = read_measured_csv(again);
  }
  const PaintPreset preset = parse_paint_preset(paint_name);
  FluorescentMaterial material = make_paint_preset(preset);

  FitOutput f;
  if (m.wavelengths.size() >= kDenseSamples) {
    const SampledSpectrum s = resample(m, SpectralGrid::standard());
    if (free_peak) {
      f.fit = fit_spectrum(s, initial_guess(s));
      material.emission = f.fit.params;
    } else {
      const PaintFit pf = fit_paint(preset, s);
      f.fit = pf.emission_fit;
      material = pf.material;
    }
    for (int i = 0; i < s.size(); ++i) {
      f.wavelengths.push_back(s.wavelength(i));
      f.values.push_back(s[i]);
    }
  } else {
    FitOptions options;
    SkewCauchyParams init = initial_guess(m.wavelengths, m.values);
    if (!free_peak) {
      options.fixed_lambda0 = material.absorption.lambda0 + material.stokes_shift;
      init.omega = init.lambda0 > *options.fixed_lambda0 ? 2.0 : (init.lambda0 < *options.fixed_lambda0 ? -2.0 : 0.0);
      init.lambda0 = *options.fixed_lambda0;
    }
    f.fit = fit_samples(m.wavelengths, m.values, init, options);
    material.emission = f.fit.params;
    f.wavelengths = m.wavelengths;
    f.values = m.values;
  }
  // A free peak drags the absorption lobe along so the preset's Stokes shift
  // still holds.
  if (free_peak) material.absorption.lambda0 = material.emission.lambda0 - material.stokes_shift;
  validate(material);

  const std::string stem = "fit_" + std::string(to_string(preset));
  write_report(out_path(g, stem + ".csv"), f);
  write_text(out_path(g, stem + ".svg"), overlay_svg(f, std::string(to_string(preset)) + " paint emission fit"));
  json preset_json = {{"name", material.name},
                      {"absorption", params_json(material.absorption)},
                      {"emission", params_json(material.emission)},
                      {"stokes_shift", material.stokes_shift},
                      {"conversion_efficiency", material.conversion_efficiency},
                      {"peak_pinned", !free_peak},
                      {"residual", f.fit.residual},
                      {"converged", f.fit.converged},
                      {"source", csv}};
  write_text(out_path(g, stem + ".json"), preset_json.dump(2) + "\n");
  char buf[64];
  std::snprintf(buf, sizeof buf, " residual=%.6g", f.fit.residual);
  out << describe(f.fit.params) << buf << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// geometry and meshes

struct PadOptions {
  std::string family = "ellipsoid";
  double width = 35.0, length = 70.0, thickness = 4.0, cyl_radius = 60.0;
  std::string radii;
  std::string cells;
};

void add_pad_options(CLI::App* cmd, PadOptions& p) {
  cmd->add_option("--pad", p.family, "flat, cylindrical or ellipsoid")->capture_default_str();
  cmd->add_option("--pad-width", p.width, "mm")->capture_default_str();
  cmd->add_option("--pad-length", p.length, "mm")->capture_default_str();
  cmd->add_option("--thickness", p.thickness, "mm")->capture_default_str();
  cmd->add_option("--cyl-radius", p.cyl_radius, "mm")->capture_default_str();
  cmd->add_option("--radii", p.radii, "ellipsoid radii rx,ry,rz in mm");
  cmd->add_option("--cells", p.cells, "hex cells u,v,w (0 picks from edge length)");
}

GelPadSpec pad_spec(const PadOptions& p) {
  GelPadSpec s;
  s.family = parse_pad_family(p.family);
  s.width = p.width;
  s.length = p.length;
  s.thickness = p.thickness;
  s.cyl_radius = p.cyl_radius;
  if (!p.radii.empty()) {
    const auto r = split_numbers(p.radii, 3, "--radii");
    s.ellipsoid_radii = Vec3d(r[0], r[1], r[2]);
  }
  if (!p.cells.empty()) {
    const auto c = split_numbers(p.cells, 3, "--cells");
    s.cells_u = static_cast<int>(c[0]);
    s.cells_v = static_cast<int>(c[1]);
    s.cells_w = static_cast<int>(c[2]);
  }
  validate(s);
  return s;
}

int cmd_gen_pad(const GlobalOptions& g, const PadOptions& p, std::ostream& out) {
  const GelPad pad = generate_gelpad(pad_spec(p));
  const std::string stem = "gelpad_" + std::string(to_string(pad.spec.family));
  {
    std::ofstream f(out_path(g, stem + ".mesh"));
    require(f.is_open(), ErrorCode::IoError, "cannot write mesh");
    write_neutral(f, pad.volume, "generated");
  }
  write_obj(out_path(g, stem + ".obj").string(), pad.surface);
  out << stem << ": " << pad.volume.node_count() << " nodes, " << pad.volume.element_count() << " hexes, "
      << pad.surface.triangle_count() << " boundary triangles\n";
  return 0;
}

HexMesh read_hex(const std::string& path) {
  if (fs::path(path).extension() == ".inp") return read_fem_deck(path).hex;
  NeutralMesh m = read_neutral(path);
  require(m.hex.element_count() > 0, ErrorCode::InvalidArgument, "'" + path + "' has no hex elements");
  return m.hex;
}

int cmd_convert(const GlobalOptions& g, const std::string& input, bool deformed, std::ostream& out) {
  HexMesh hex = read_hex(input);
  if (deformed) hex = apply_displacements(hex);
  const TriMesh surface = hex_to_surface(hex);
  const std::string stem = fs::path(input).stem().string() + "_surface";
  write_obj(out_path(g, stem + ".obj").string(), surface);
  {
    std::ofstream f(out_path(g, stem + ".mesh"));
    require(f.is_open(), ErrorCode::IoError, "cannot write mesh");
    write_neutral(f, surface, deformed ? "external-fem" : "converted");
  }
  out << stem << ": " << surface.triangle_count() << " triangles, Euler characteristic "
      << euler_characteristic(surface) << '\n';
  return 0;
}

struct IndentOptions {
  std::string kind = "sphere";
  std::string dims = "5,0,0";
  std::string xy = "0,0";
  std::string rotation;
  double depth = 1.0;
  std::string mode = "normal";
};

void add_indent_options(CLI::App* cmd, IndentOptions& o) {
  cmd->add_option("--indenter", o.kind, "cylinder, cuboid or sphere")->capture_default_str();
  cmd->add_option("--dims", o.dims, "indenter dimensions in mm")->capture_default_str();
  cmd->add_option("--at", o.xy, "indenter x,y over the pad in mm")->capture_default_str();
  cmd->add_option("--depth", o.depth, "indentation depth in mm")->capture_default_str();
}

int cmd_indent(const GlobalOptions& g, const PadOptions& p, const IndentOptions& o, std::ostream& out) {
  const GelPadSpec spec = pad_spec(p);
  const auto d = split_numbers(o.dims, 3, "--dims");
  const auto xy = split_numbers(o.xy, 2, "--at");
  Indenter ind = default_indenter(spec, parse_indenter_kind(o.kind), Vec3d(d[0], d[1], d[2]), xy[0], xy[1]);
  if (!o.rotation.empty()) {
    const auto r = split_numbers(o.rotation, 9, "--rotation");
    for (int i = 0; i < 9; ++i) ind.pose.rotation(i / 3, i % 3) = r[i];
    validate(ind);
  }
  DeformSettings settings;
  if (o.mode == "vertical")
    settings.projection_mode = ProjectionMode::Vertical;
  else if (o.mode != "normal")
    throw UsageError("--projection must be normal or vertical");
  const TriMesh face = sensing_face(generate_gelpad(spec));
  const IndentResult r = indent_surface(face, ind, o.depth, settings);
  const std::string stem = "indented_" + std::string(to_string(spec.family));
  {
    std::ofstream f(out_path(g, stem + ".mesh"));
    require(f.is_open(), ErrorCode::IoError, "cannot write mesh");
    write_neutral(f, r.surface, "approximate-deformer");
  }
  write_obj(out_path(g, stem + ".obj").string(), r.surface);
  out << stem << ": depth " << o.depth << " mm, " << r.contact.sum() << " contact vertices, min distance "
      << vertex_distances(r.surface, r.indenter).minCoeff() << " mm\n";
  return 0;
}

// ---------------------------------------------------------------------------
// rendering

struct SceneOptions {
  int lights = 1;
  double angle = 30.0;
  double top_scale = 1.0;
  double bottom_scale = 1.0;
  bool no_indenter = false;
  std::string external;
};

void add_scene_options(CLI::App* cmd, SceneOptions& s) {
  cmd->add_option("--lights", s.lights, "1 (bottom) or 2 (bottom and top)")->capture_default_str();
  cmd->add_option("--angle", s.angle, "LED tilt in degrees")->capture_default_str();
  cmd->add_option("--bottom-scale", s.bottom_scale, "bottom panel radiant scale")->capture_default_str();
  cmd->add_option("--top-scale", s.top_scale, "top panel radiant scale")->capture_default_str();
  cmd->add_flag("--no-indenter", s.no_indenter, "leave the pad undeformed");
  cmd->add_option("--external", s.external, "deformed external FEM mesh (neutral or .inp)");
}

SensorConfig sensor_config(const GlobalOptions& g, const PadOptions& p, const IndentOptions& o, const SceneOptions& s) {
  SensorConfig c;
  c.pad = pad_spec(p);
  c.light_count = s.lights;
  c.light_angle = s.angle;
  c.bottom_radiant_scale = s.bottom_scale;
  c.top_radiant_scale = s.top_scale;
  if (s.no_indenter)
    c.indenter.reset();
  else
    c.indenter = parse_indenter_kind(o.kind);
  const auto d = split_numbers(o.dims, 3, "--dims");
  const auto xy = split_numbers(o.xy, 2, "--at");
  c.indenter_dims = Vec3d(d[0], d[1], d[2]);
  c.indenter_xy = Vec2d(xy[0], xy[1]);
  c.depth = o.depth;
  c.external_mesh = s.external;
  apply_overrides(g, c);
  return c;
}

Scene load_or_build(const GlobalOptions& g, const PadOptions& p, const IndentOptions& o, const SceneOptions& s) {
  Scene scene = g.scene.empty() ? make_sensor_scene(sensor_config(g, p, o, s)) : read_scene(g.scene);
  apply_overrides(g, scene);
  return scene;
}

int cmd_render(const GlobalOptions& g, const Scene& scene, std::ostream& out) {
  const RenderScene rs(scene);
  const Image img = render(rs, scene.render, threads_of(g));
  write_png(out_path(g, "render.png").string(), img);
  write_raw(out_path(g, "render.raw").string(), img);
  write_scene(out_path(g, "render_scene.json").string(), scene);
  const Probe probe = default_probe(scene);
  out << "render.png " << img.width << "x" << img.height << " spp " << scene.render.samples_per_pixel
      << " probe (" << probe.pixel.x() << ", " << probe.pixel.y()
      << ") intensity " << probe_intensity(img, probe.pixel.x(), probe.pixel.y(), probe.half_window) << '\n';
  return 0;
}

int cmd_sweep(const GlobalOptions& g, const Scene& base, const std::string& angles, const std::string& probe,
              int window, std::ostream& out) {
  SweepSpec spec;
  spec.variable = SweepVariable::LightAngle;
  spec.base = base;
  if (angles.empty()) {
    spec.values = default_angle_grid();
    spec.default_grid = true;
  } else {
    std::stringstream ss(angles);
    std::string item;
    while (std::getline(ss, item, ',')) spec.values.push_back(item);
  }
  if (!probe.empty()) {
    const auto p = split_numbers(probe, 2, "--probe");
    spec.probe = Probe{Eigen::Vector2i(static_cast<int>(p[0]), static_cast<int>(p[1])), window};
  } else {
    Probe pr = default_probe(base);
    pr.half_window = window;
    spec.probe = pr;
  }
  const SweepResult r = run_sweep(spec, g.out_dir, threads_of(g));
  json m;
  m["tool"] = "finsim";
  m["version"] = tool_version();
  m["command"] = "sweep-angle";
  m["values"] = spec.values;
  m["default_grid"] = spec.default_grid;
  m["probe"] = {{"x", spec.probe->pixel.x()}, {"y", spec.probe->pixel.y()}, {"half_window", spec.probe->half_window}};
  m["seed"] = base.render.seed;
  m["samples_per_pixel"] = base.render.samples_per_pixel;
  m["scene"] = json::parse(scene_to_json(base));
  m["csv"] = r.csv.filename().string();
  m["csv_digest"] = file_digest(r.csv);
  write_text(out_path(g, "sweep_angle_manifest.json"), m.dump(2) + "\n");
  for (const auto& row : r.rows) out << row.value << ' ' << row.intensity << '\n';
  return 0;
}

int cmd_compare(const GlobalOptions& g, const std::string& one_path, const std::string& two_path,
                const PadOptions& p, const IndentOptions& o, SceneOptions s, std::ostream& out) {
  Scene one, two;
  if (!one_path.empty() || !two_path.empty()) {
    if (one_path.empty() || two_path.empty()) throw UsageError("--one and --two must be given together");
    one = read_scene(one_path);
    two = read_scene(two_path);
  } else {
    s.lights = 1;
    one = make_sensor_scene(sensor_config(g, p, o, s));
    s.lights = 2;
    two = make_sensor_scene(sensor_config(g, p, o, s));
  }
  apply_overrides(g, one);
  apply_overrides(g, two);
  const UniformityReport r = compare_lights(one, two, threads_of(g));
  std::ostringstream csv;
  csv.precision(17);
  csv << "scene,lights,mean_luminance,cv\n";
  csv << "one," << one.led_panels.size() << ',' << r.mean_one << ',' << r.cv_one << '\n';
  csv << "two," << two.led_panels.size() << ',' << r.mean_two << ',' << r.cv_two << '\n';
  csv << "# cv ratio (two / one) " << r.ratio << ", region " << r.region_pixels << " px\n";
  write_text(out_path(g, "compare_lights.csv"), csv.str());
  out << "cv one " << r.cv_one << ", cv two " << r.cv_two << ", ratio " << r.ratio << '\n';
  return 0;
}

int cmd_pipeline(const GlobalOptions& g, const std::string& manifest, const SensorConfig* config, std::ostream& out) {
  const PipelineResult r =
      manifest.empty() ? run_pipeline(*config, g.out_dir, threads_of(g)) : replay_pipeline(manifest, g.out_dir, threads_of(g));
  out << "pipeline: " << r.scene.deformation_source << ", image " << r.png.string() << ", manifest "
      << r.manifest.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optical simulation toolkit for fluorescent-paint tactile fingertips", "finsim"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "render seed");
  app.add_option("--spp", g.spp, "samples per pixel");
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--scene", g.scene, "scene JSON file");
  app.add_option("--width", g.width, "image width");
  app.add_option("--height", g.height, "image height");
  app.add_option("--max-depth", g.max_depth, "path length limit");
  app.add_option("--rr-start", g.rr_start, "depth where Russian roulette starts");
  app.add_option("--exposure", g.exposure, "exposure scale");
  app.add_option("--threads", g.threads, "render threads (default FINSIM_THREADS or all cores)");

  PadOptions pad;
  IndentOptions indent;
  SceneOptions scene_opts;

  auto* fit = app.add_subcommand("fit", "fit a paint's emission lobe to a measured spectrum");
  std::string fit_csv, fit_paint_name = "red";
  bool free_peak = false;
  fit->add_option("csv", fit_csv, "measured CSV (wavelength_nm,value)")->required();
  fit->add_option("--paint", fit_paint_name, "red or green")->capture_default_str();
  fit->add_flag("--free-peak", free_peak, "fit the peak wavelength instead of pinning it to absorption + Stokes shift");

  auto* gen = app.add_subcommand("gen-pad", "generate a gel-pad hex mesh");
  add_pad_options(gen, pad);

  auto* conv = app.add_subcommand("convert", "hex mesh to oriented triangle surface");
  std::string conv_input;
  bool conv_deformed = false;
  conv->add_option("mesh", conv_input, "neutral mesh or FEM deck (.inp)")->required();
  conv->add_flag("--deformed", conv_deformed, "apply nodal displacements first");

  auto* ind = app.add_subcommand("indent", "indent the sensing face with the approximate deformer");
  add_pad_options(ind, pad);
  add_indent_options(ind, indent);
  ind->add_option("--rotation", indent.rotation, "row-major 3x3 indenter rotation");
  ind->add_option("--projection", indent.mode, "normal or vertical")->capture_default_str();

  auto* rend = app.add_subcommand("render", "render a scene");
  add_pad_options(rend, pad);
  add_indent_options(rend, indent);
  add_scene_options(rend, scene_opts);

  auto* sweep = app.add_subcommand("sweep-angle", "probe intensity against LED tilt");
  std::string angles, probe;
  int window = 4;
  sweep->add_option("--angles", angles, "comma-separated angles (default 10..150 step 10)");
  sweep->add_option("--probe", probe, "probe pixel x,y (default: image of the indenter point)");
  sweep->add_option("--window", window, "probe half window")->capture_default_str();
  add_pad_options(sweep, pad);
  add_indent_options(sweep, indent);
  add_scene_options(sweep, scene_opts);

  auto* cmp = app.add_subcommand("compare-lights", "luminance uniformity with one and two LED panels");
  std::string one_path, two_path;
  cmp->add_option("--one", one_path, "one-light scene JSON");
  cmp->add_option("--two", two_path, "two-light scene JSON");
  add_pad_options(cmp, pad);
  add_indent_options(cmp, indent);
  add_scene_options(cmp, scene_opts);

  auto* pipe = app.add_subcommand("pipeline", "generate, indent or import, convert and render");
  std::string manifest;
  pipe->add_option("--manifest", manifest, "replay a previous run");
  add_pad_options(pipe, pad);
  add_indent_options(pipe, indent);
  add_scene_options(pipe, scene_opts);

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "finsim: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*fit) return cmd_fit(g, fit_csv, fit_paint_name, free_peak, out);
    if (*gen) return cmd_gen_pad(g, pad, out);
    if (*conv) return cmd_convert(g, conv_input, conv_deformed, out);
    if (*ind) return cmd_indent(g, pad, indent, out);
    if (*rend) return cmd_render(g, load_or_build(g, pad, indent, scene_opts), out);
    if (*sweep) return cmd_sweep(g, load_or_build(g, pad, indent, scene_opts), angles, probe, window, out);
    if (*cmp) return cmd_compare(g, one_path, two_path, pad, indent, scene_opts, out);
    if (*pipe) {
      if (!manifest.empty()) return cmd_pipeline(g, manifest, nullptr, out);
      const SensorConfig c = sensor_config(g, pad, indent, scene_opts);
      return cmd_pipeline(g, {}, &c, out);
    }
  } catch (const UsageError& e) {
    err << "finsim: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "finsim: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "finsim: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace finsim
