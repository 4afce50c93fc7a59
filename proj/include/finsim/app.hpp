#pragma once

#include "finsim/deform.hpp"
#include "finsim/render.hpp"
#include "finsim/scene.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsim {

/// Bad command-line usage (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string tool_version();

/// Recipe for a complete sensor scene: pad, lights, optional indentation.
struct SensorConfig {
  GelPadSpec pad = [] {
    GelPadSpec p;
    p.family = PadFamily::Ellipsoid;
    return p;
  }();
  int light_count = 1;  ///< 1: bottom panel, 2: bottom and top
  double light_angle = 30.0;
  double bottom_radiant_scale = 1.0;
  double top_radiant_scale = 1.0;
  std::optional<IndenterKind> indenter = IndenterKind::Sphere;
  Vec3d indenter_dims = Vec3d(5.0, 0.0, 0.0);
  Vec2d indenter_xy = Vec2d::Zero();
  double depth = 1.0;
  /// Imported FEM result used instead of the approximate deformer.
  std::string external_mesh;
  RenderSettings render;
  int width = 320;
  int height = 240;
};

Scene make_sensor_scene(const SensorConfig& config, const DeformSettings& deform = {});

/// Copies of the scene's LED panels tilted to `angle_deg`.
std::vector<LedPanel> tilted_lights(const std::vector<LedPanel>& panels, double angle_deg);

struct Probe {
  Eigen::Vector2i pixel = Eigen::Vector2i::Zero();
  int half_window = 4;  ///< 9 x 9 pixels
};

/// Window centred on the image of the scene's probe point.
Probe default_probe(const Scene& scene);

enum class SweepVariable { LightAngle, LightCount, GelpadShape, IndenterDepth };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::LightAngle;
  std::vector<std::string> values;
  Scene base;
  /// Fixed probe; by default each item probes its own scene's probe point.
  std::optional<Probe> probe;
  /// Recorded in outputs when the values are the built-in default grid.
  bool default_grid = false;
};

/// Throws InvalidArgument: fewer than two values, unsorted numeric values,
/// angles outside [0, 180).
void validate(const SweepSpec& spec);

struct SweepRow {
  std::string value;
  double intensity = 0.0;
  std::string image;
  std::string raw;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool complete = true;
  std::string error;
  std::filesystem::path csv, svg;
};

/// One render per value at the base scene's seed. Writes `<name>.csv`,
/// `<name>.svg` and per-value PNG and raw images to `out_dir`. On a render
/// failure the rows so far are written, flagged incomplete, and the error is
/// rethrown.
SweepResult run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir, int threads = 0);

/// Default angle grid: 10 to 150 degrees in steps of 10.
std::vector<std::string> default_angle_grid();

struct UniformityReport {
  double mean_one = 0.0, mean_two = 0.0;
  double cv_one = 0.0, cv_two = 0.0;
  double ratio = 0.0;  ///< cv_two / cv_one
  long region_pixels = 0;
};

/// Coefficient of variation (stddev / mean) of luminance over masked pixels.
double region_cv(const Image& image, const Eigen::Array<bool, Eigen::Dynamic, 1>& mask);

/// Renders both scenes and compares luminance uniformity over the pad
/// region. Throws RegionMaskMismatch when the pad regions differ.
UniformityReport compare_lights(const Scene& one, const Scene& two, int threads = 0);

/// Half the chi-square distance between normalised luminance histograms of
/// two equally sized pixel sets, over a shared range clipped at the pooled
/// 99th percentile.
double histogram_chi2(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, int bins = 32);

/// Luminance values in the probe window.
Eigen::ArrayXd probe_region(const Image& image, const Probe& probe);

struct PipelineResult {
  Scene scene;
  Image image;
  std::filesystem::path png, raw, scene_file, manifest;
};

/// generate, (indent | import external), convert, render; writes
/// pipeline.png, pipeline.raw, scene.json and manifest.json.
PipelineResult run_pipeline(const SensorConfig& config, const std::filesystem::path& out_dir, int threads = 0);

/// Re-runs a pipeline from its manifest into `out_dir`.
PipelineResult replay_pipeline(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                               int threads = 0);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 usage error, 2 validation error, 3 runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finsim
