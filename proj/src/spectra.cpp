#include "finsim/spectra.hpp"

#include "finsim/svg.hpp"
#include "spectral_tables.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace finsim {

// ---------------------------------------------------------------------------
// Grid and sampled spectra

int SpectralGrid::size() const {
  return static_cast<int>(std::lround((lambda_max - lambda_min) / step)) + 1;
}

void validate(const SpectralGrid& grid) {
  require(grid.step > 0.0, ErrorCode::InvalidArgument, "spectral grid step must be positive");
  require(grid.lambda_max >= grid.lambda_min, ErrorCode::InvalidArgument, "spectral grid range is inverted");
  const double n = (grid.lambda_max - grid.lambda_min) / grid.step;
  require(std::abs(n - std::round(n)) < 1e-9, ErrorCode::InvalidArgument,
          "spectral grid range is not a whole number of steps");
}

SampledSpectrum::SampledSpectrum(const SpectralGrid& grid) : grid_(grid) {
  validate(grid_);
  values_ = Eigen::VectorXd::Zero(grid_.size());
}

SampledSpectrum::SampledSpectrum(const SpectralGrid& grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  validate(grid_);
  require(values_.size() == grid_.size(), ErrorCode::GridMismatch,
          "expected " + std::to_string(grid_.size()) + " samples, got " + std::to_string(values_.size()));
  require((values_.array() >= 0.0).all() && values_.allFinite(), ErrorCode::InvalidArgument,
          "spectral samples must be finite and non-negative");
}

SampledSpectrum SampledSpectrum::constant(double value, const SpectralGrid& grid) {
  validate(grid);
  return SampledSpectrum(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

double SampledSpectrum::at(double lambda) const {
  const double t = (lambda - grid_.lambda_min) / grid_.step;
  if (t < 0.0 || t > size() - 1) return 0.0;
  const int i = std::min(static_cast<int>(t), size() - 2);
  if (size() == 1) return values_[0];
  const double f = t - i;
  return (1.0 - f) * values_[i] + f * values_[i + 1];
}

SampledSpectrum& SampledSpectrum::operator+=(const SampledSpectrum& rhs) {
  require(grid_ == rhs.grid_, ErrorCode::GridMismatch, "spectra live on different grids");
  values_ += rhs.values_;
  return *this;
}

SampledSpectrum& SampledSpectrum::operator*=(double s) {
  require(s >= 0.0, ErrorCode::InvalidArgument, "spectra can only be scaled by non-negative factors");
  values_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Skew Cauchy model

void validate(const SkewCauchyParams& p) {
  require(std::isfinite(p.lambda0) && std::isfinite(p.gamma) && std::isfinite(p.omega) && std::isfinite(p.height),
          ErrorCode::InvalidArgument, "skew Cauchy parameters must be finite");
  require(p.gamma > 0.0, ErrorCode::InvalidArgument, "skew Cauchy width must be positive");
  require(p.height > 0.0, ErrorCode::InvalidArgument, "skew Cauchy height must be positive");
  require(p.lambda0 >= kLambda0Min && p.lambda0 <= kLambda0Max, ErrorCode::InvalidArgument,
          "skew Cauchy peak outside [200, 1000] nm");
}

Eigen::Vector4d skew_cauchy_gradient(const SkewCauchyParams& p, double lambda) {
  const double x = lambda - p.lambda0;
  const double denom = p.gamma * p.gamma + x * x;
  const double lorentz = 1.0 / denom;
  const double u = p.omega * x / p.gamma;
  const double bracket = std::atan(u) / kPi + 0.5;
  const double dbracket_du = 1.0 / (kPi * (1.0 + u * u));
  const double f = p.height * lorentz * bracket;

  // d(lorentz)/dx = -2x / denom^2, d(lorentz)/dgamma = -2 gamma / denom^2
  const double du_dx = p.omega / p.gamma;
  const double df_dx = p.height * (-2.0 * x * lorentz * lorentz * bracket + lorentz * dbracket_du * du_dx);
  Eigen::Vector4d g;
  g[0] = -df_dx;
  g[1] = p.height * (-2.0 * p.gamma * lorentz * lorentz * bracket -
                     lorentz * dbracket_du * p.omega * x / (p.gamma * p.gamma));
  g[2] = p.height * lorentz * dbracket_du * x / p.gamma;
  g[3] = f / p.height;
  return g;
}

SampledSpectrum sample_model(const SkewCauchyParams& p, const SpectralGrid& grid) {
  validate(p);
  validate(grid);
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < v.size(); ++i) v[i] = eval_skew_cauchy(p, grid.wavelength(i));
  return SampledSpectrum(grid, std::move(v));
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

struct Problem {
  std::span<const double> lambda;
  std::span<const double> y;
  FitOptions options;

  Eigen::Vector4d project(Eigen::Vector4d x) const {
    if (options.fixed_lambda0) x[0] = *options.fixed_lambda0;
    x[0] = std::clamp(x[0], kLambda0Min, kLambda0Max);
    x[1] = std::max(x[1], options.gamma_min);
    x[3] = std::max(x[3], options.height_min);
    return x;
  }

  double cost(const Eigen::Vector4d& x) const {
    const SkewCauchyParams p = from_vector(x);
    double c = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      const double r = eval_skew_cauchy(p, lambda[i]) - y[i];
      c += r * r;
    }
    return c;
  }

  void linearize(const Eigen::Vector4d& x, Eigen::Matrix4d& jtj, Eigen::Vector4d& jtr) const {
    const SkewCauchyParams p = from_vector(x);
    jtj.setZero();
    jtr.setZero();
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      Eigen::Vector4d g = skew_cauchy_gradient(p, lambda[i]);
      if (options.fixed_lambda0) g[0] = 0.0;
      const double r = eval_skew_cauchy(p, lambda[i]) - y[i];
      jtj.noalias() += g * g.transpose();
      jtr.noalias() += g * r;
    }
  }
};

}  // namespace

FitResult fit_samples(std::span<const double> wavelengths, std::span<const double> values,
                      const SkewCauchyParams& init, const FitOptions& options) {
  require(wavelengths.size() == values.size(), ErrorCode::CardinalityMismatch,
          "wavelength and value counts differ");
  require(wavelengths.size() >= 8, ErrorCode::InvalidArgument, "a spectral fit needs at least 8 samples");
  const double scale = std::accumulate(values.begin(), values.end(), 0.0,
                                       [](double acc, double v) { return acc + v * v; });
  require(scale > 0.0, ErrorCode::DegenerateInput, "measured spectrum is identically zero");
  validate(init);

  const Problem problem{wavelengths, values, options};
  Eigen::Vector4d x = problem.project(to_vector(init));
  double cost = problem.cost(x);
  Eigen::Matrix4d jtj;
  Eigen::Vector4d jtr;
  problem.linearize(x, jtj, jtr);

  FitResult result;
  const double ftol = 1e-15;
  const double xtol = 1e-13;
  double mu = 1e-3 * jtj.diagonal().maxCoeff();
  double nu = 2.0;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (cost <= 1e-30 * scale || jtr.lpNorm<Eigen::Infinity>() <= 1e-16 * std::sqrt(scale)) {
      result.converged = true;
      break;
    }
    Eigen::Vector4d diag = jtj.diagonal().cwiseMax(1e-300);
    if (options.fixed_lambda0) diag[0] = 1.0;
    Eigen::Matrix4d lhs = jtj;
    lhs.diagonal() += mu * diag;
    Eigen::Vector4d step = lhs.ldlt().solve(-jtr);
    if (options.fixed_lambda0) step[0] = 0.0;

    const Eigen::Vector4d candidate = problem.project(x + step);
    const Eigen::Vector4d taken = candidate - x;
    if (taken.norm() <= xtol * (x.norm() + xtol)) {
      result.converged = true;
      break;
    }
    const double new_cost = problem.cost(candidate);
    // Predicted reduction of the Gauss-Newton model along the projected step.
    const double predicted = -(2.0 * taken.dot(jtr) + taken.dot(jtj * taken));
    const double rho = predicted > 0.0 ? (cost - new_cost) / predicted : -1.0;
    if (new_cost < cost && rho > 0.0) {
      const double reduction = cost - new_cost;
      x = candidate;
      cost = new_cost;
      problem.linearize(x, jtj, jtr);
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (reduction <= ftol * cost) {
        result.converged = true;
        ++iter;
        break;
      }
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!std::isfinite(mu) || mu > 1e300) {
        result.converged = true;  // stationary: no step reduces the cost
        break;
      }
    }
  }
  result.params = from_vector(x);
  result.residual = cost;
  result.iterations = iter;
  return result;
}

FitResult fit_spectrum(const SampledSpectrum& measured, const SkewCauchyParams& init, const FitOptions& options) {
  std::vector<double> lambda(measured.size());
  for (int i = 0; i < measured.size(); ++i) lambda[i] = measured.wavelength(i);
  const Eigen::VectorXd& v = measured.values();
  return fit_samples(lambda, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), init, options);
}

SkewCauchyParams initial_guess(std::span<const double> wavelengths, std::span<const double> values) {
  require(!values.empty() && wavelengths.size() == values.size(), ErrorCode::InvalidArgument,
          "initial guess needs matching non-empty samples");
  const auto peak_it = std::max_element(values.begin(), values.end());
  const std::size_t k = static_cast<std::size_t>(peak_it - values.begin());
  const double peak = *peak_it;
  require(peak > 0.0, ErrorCode::DegenerateInput, "measured spectrum is identically zero");

  // Half width at half maximum, averaged over whichever sides reach it.
  double width_sum = 0.0;
  int sides = 0;
  for (int dir : {-1, 1}) {
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k) + dir;
         j >= 0 && j < static_cast<std::ptrdiff_t>(values.size()); j += dir) {
      if (values[j] <= 0.5 * peak) {
        const double v0 = values[j - dir], v1 = values[j];
        const double t = (v0 - 0.5 * peak) / std::max(v0 - v1, 1e-300);
        const double lam = wavelengths[j - dir] + t * (wavelengths[j] - wavelengths[j - dir]);
        width_sum += std::abs(lam - wavelengths[k]);
        ++sides;
        break;
      }
    }
  }
  double gamma = sides > 0 ? width_sum / sides : 0.25 * (wavelengths.back() - wavelengths.front());
  gamma = std::max(gamma, 1.0);
  SkewCauchyParams p;
  p.lambda0 = std::clamp(wavelengths[k], kLambda0Min, kLambda0Max);
  p.gamma = gamma;
  p.omega = 0.0;
  p.height = 2.0 * gamma * gamma * peak;
  return p;
}

SkewCauchyParams initial_guess(const SampledSpectrum& measured) {
  std::vector<double> lambda(measured.size());
  for (int i = 0; i < measured.size(); ++i) lambda[i] = measured.wavelength(i);
  const Eigen::VectorXd& v = measured.values();
  return initial_guess(lambda, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

// ---------------------------------------------------------------------------
// Paint presets

void validate(const FluorescentMaterial& m) {
  validate(m.absorption);
  validate(m.emission);
  require(m.stokes_shift > 0.0, ErrorCode::InvalidArgument, "Stokes shift must be positive (red-shifted emission)");
  require(std::abs(m.emission.lambda0 - m.absorption.lambda0 - m.stokes_shift) < 1e-9, ErrorCode::InvalidArgument,
          "emission peak must sit exactly one Stokes shift above the absorption peak");
  require(m.conversion_efficiency >= 0.0 && m.conversion_efficiency <= 1.0, ErrorCode::InvalidArgument,
          "conversion efficiency must lie in [0, 1]");
}

PaintPreset parse_paint_preset(std::string_view name) {
  if (name == "red") return PaintPreset::Red;
  if (name == "green") return PaintPreset::Green;
  throw Error(ErrorCode::UnknownPreset, "unknown paint preset '" + std::string(name) + "'");
}

std::string_view to_string(PaintPreset preset) { return preset == PaintPreset::Red ? "red" : "green"; }

double stokes_shift_for(PaintPreset preset) { return preset == PaintPreset::Red ? 100.0 : 50.0; }

namespace {

SampledSpectrum table_spectrum(const std::array<double, tables::kSamples>& t) {
  Eigen::VectorXd v(tables::kSamples);
  for (int i = 0; i < tables::kSamples; ++i) v[i] = t[i];
  return SampledSpectrum(SpectralGrid::standard(), std::move(v));
}

SkewCauchyParams unit_peak_lobe(double lambda0, double gamma, double omega) {
  return {lambda0, gamma, omega, 2.0 * gamma * gamma};
}

}  // namespace

SampledSpectrum colorchecker_red() { return table_spectrum(tables::kColorCheckerRed); }
SampledSpectrum colorchecker_green() { return table_spectrum(tables::kColorCheckerGreen); }

FluorescentMaterial make_paint_preset(PaintPreset preset) {
  FluorescentMaterial m;
  m.name = std::string(to_string(preset));
  m.stokes_shift = stokes_shift_for(preset);
  m.conversion_efficiency = kDefaultConversionEfficiency;
  m.absorption = unit_peak_lobe(kExcitationWavelength, 30.0, 0.0);
  if (preset == PaintPreset::Red) {
    // Long red tail: the visible peak lands well past lambda0.
    m.emission = unit_peak_lobe(kExcitationWavelength + m.stokes_shift, 50.0, 5.0);
    m.base_reflectance = colorchecker_red();
  } else {
    m.emission = unit_peak_lobe(kExcitationWavelength + m.stokes_shift, 25.0, 3.0);
    m.base_reflectance = colorchecker_green();
  }
  validate(m);
  return m;
}

FluorescentMaterial make_paint_preset(std::string_view name) { return make_paint_preset(parse_paint_preset(name)); }

PaintFit fit_paint(PaintPreset preset, const SampledSpectrum& emission,
                   const std::optional<SampledSpectrum>& absorption) {
  PaintFit out;
  out.material = make_paint_preset(preset);
  if (absorption) {
    out.absorption_fit = fit_spectrum(*absorption, initial_guess(*absorption));
    out.material.absorption = out.absorption_fit->params;
  }
  FitOptions options;
  options.fixed_lambda0 = out.material.absorption.lambda0 + out.material.stokes_shift;
  SkewCauchyParams init = initial_guess(emission);
  const double observed_peak = init.lambda0;
  init.lambda0 = *options.fixed_lambda0;
  init.omega = observed_peak > init.lambda0 ? 2.0 : (observed_peak < init.lambda0 ? -2.0 : 0.0);
  init.height = 2.0 * init.gamma * init.gamma * emission.values().maxCoeff();
  out.emission_fit = fit_spectrum(emission, init, options);
  out.material.emission = out.emission_fit.params;
  out.material.emission.lambda0 = *options.fixed_lambda0;
  validate(out.material);
  return out;
}

SampledSpectrum led_spectrum(double peak_nm, double sigma_nm) {
  const SpectralGrid grid = SpectralGrid::standard();
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < v.size(); ++i) {
    const double d = (grid.wavelength(i) - peak_nm) / sigma_nm;
    v[i] = std::exp(-0.5 * d * d);
  }
  return SampledSpectrum(grid, std::move(v));
}

// ---------------------------------------------------------------------------
// Colour

namespace {

const Eigen::Matrix3d& xyz_to_linear_srgb() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 3.2404542, -1.5371385, -0.4985314,  //
                                    -0.9692660, 1.8760108, 0.0415560,                        //
                                    0.0556434, -0.2040259, 1.0572252)
                                       .finished();
  return m;
}

Eigen::Vector3d xyz_integral(const Eigen::VectorXd& values, double step) {
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  for (int i = 0; i < tables::kSamples; ++i) {
    const auto& c = tables::kCie1931[static_cast<std::size_t>(i)];
    xyz += values[i] * Eigen::Vector3d(c[0], c[1], c[2]);
  }
  return xyz * step;
}

const Eigen::Vector3d& white_rgb() {
  static const Eigen::Vector3d w =
      xyz_to_linear_srgb() * xyz_integral(Eigen::VectorXd::Ones(tables::kSamples), SpectralGrid::standard().step);
  return w;
}

}  // namespace

Eigen::Vector3d spectrum_to_xyz(const SampledSpectrum& s) {
  require(s.grid() == SpectralGrid::standard(), ErrorCode::GridMismatch,
          "colour conversion requires the default 380-720/5 nm grid");
  return xyz_integral(s.values(), s.grid().step);
}

Rgb spectrum_to_rgb(const SampledSpectrum& s) {
  const Eigen::Vector3d rgb = xyz_to_linear_srgb() * spectrum_to_xyz(s);
  return (rgb.array() / white_rgb().array());
}

Rgb normalized_color(const Rgb& c) {
  const Rgb clamped = c.max(0.0);
  const double m = clamped.maxCoeff();
  return m > 0.0 ? Rgb(clamped / m) : Rgb(Rgb::Zero());
}

double absorbed_fraction(const SampledSpectrum& source, const SkewCauchyParams& absorption) {
  validate(absorption);
  double peak = 0.0;
  for (int i = 0; i < source.size(); ++i) peak = std::max(peak, eval_skew_cauchy(absorption, source.wavelength(i)));
  const double total = source.values().sum();
  if (total <= 0.0 || peak <= 0.0) return 0.0;
  double overlap = 0.0;
  for (int i = 0; i < source.size(); ++i) overlap += source[i] * eval_skew_cauchy(absorption, source.wavelength(i));
  return std::clamp(overlap / (peak * total), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// I/O

MeasuredSpectrum read_measured_csv(std::istream& in) {
  std::string line;
  bool header_seen = false;
  MeasuredSpectrum m;
  std::vector<std::pair<double, double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    if (!header_seen) {
      std::string h;
      for (char c : line)
        if (c != ' ' && c != '\t') h += c;
      require(h == "wavelength_nm,value", ErrorCode::ParseError,
              "expected header 'wavelength_nm,value', got '" + line + "'");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    double w = 0.0, v = 0.0;
    char comma = 0;
    if (!(ls >> w >> comma >> v) || comma != ',')
      throw Error(ErrorCode::ParseError, "malformed row at line " + std::to_string(line_no) + ": '" + line + "'");
    require(std::isfinite(w) && std::isfinite(v) && v >= 0.0, ErrorCode::ParseError,
            "non-finite or negative value at line " + std::to_string(line_no));
    rows.emplace_back(w, v);
  }
  require(!rows.empty(), ErrorCode::InvalidArgument, "measured spectrum CSV has no data rows");
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i)
    require(rows[i].first > rows[i - 1].first, ErrorCode::ParseError, "duplicate wavelength in measured CSV");
  for (const auto& [w, v] : rows) {
    m.wavelengths.push_back(w);
    m.values.push_back(v);
  }
  return m;
}

MeasuredSpectrum read_measured_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_measured_csv(in);
}

SampledSpectrum resample(const MeasuredSpectrum& m, const SpectralGrid& grid) {
  require(!m.wavelengths.empty() && m.wavelengths.size() == m.values.size(), ErrorCode::InvalidArgument,
          "cannot resample an empty measurement");
  validate(grid);
  const double lo = m.wavelengths.front(), hi = m.wavelengths.back();
  const int first = static_cast<int>(std::ceil((lo - grid.lambda_min) / grid.step - 1e-9));
  const int last = static_cast<int>(std::floor((hi - grid.lambda_min) / grid.step + 1e-9));
  const int i0 = std::max(first, 0);
  const int i1 = std::min(last, grid.size() - 1);
  require(i1 >= i0, ErrorCode::InvalidArgument, "measured range does not overlap the spectral grid");
  SpectralGrid sub{grid.wavelength(i0), grid.wavelength(i1), grid.step};
  Eigen::VectorXd v(i1 - i0 + 1);
  std::size_t k = 0;
  for (int i = i0; i <= i1; ++i) {
    const double w = grid.wavelength(i);
    while (k + 1 < m.wavelengths.size() && m.wavelengths[k + 1] < w) ++k;
    if (k + 1 >= m.wavelengths.size()) {
      v[i - i0] = m.values.back();
      continue;
    }
    const double w0 = m.wavelengths[k], w1 = m.wavelengths[k + 1];
    const double t = std::clamp((w - w0) / (w1 - w0), 0.0, 1.0);
    v[i - i0] = (1.0 - t) * m.values[k] + t * m.values[k + 1];
  }
  return SampledSpectrum(sub, std::move(v));
}

std::string describe(const SkewCauchyParams& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "lambda0=%.6g gamma=%.6g omega=%.6g h=%.6g", p.lambda0, p.gamma, p.omega, p.height);
  return buf;
}

void write_fit_report(std::ostream& out, const SampledSpectrum& measured, const FitResult& fit) {
  char buf[128];
  std::snprintf(buf, sizeof buf, " residual=%.6g iterations=%d converged=%s", fit.residual, fit.iterations,
                fit.converged ? "true" : "false");
  out << "# " << describe(fit.params) << buf << '\n';
  out << "wavelength_nm,measured,fitted\n";
  for (int i = 0; i < measured.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g,%.17g,%.17g\n", measured.wavelength(i), measured[i],
                  eval_skew_cauchy(fit.params, measured.wavelength(i)));
    out << buf;
  }
}

std::string fit_overlay_svg(const SampledSpectrum& measured, const FitResult& fit, const std::string& title) {
  PlotSeries meas{"measured", {}, {}, "#d62728", true, false};
  for (int i = 0; i < measured.size(); ++i) {
    meas.x.push_back(measured.wavelength(i));
    meas.y.push_back(measured[i]);
  }
  PlotSeries model{"fitted model", {}, {}, "#1f77b4", false, true};
  const SpectralGrid grid = SpectralGrid::standard();
  for (double w = grid.lambda_min; w <= grid.lambda_max + 1e-9; w += 1.0) {
    model.x.push_back(w);
    model.y.push_back(eval_skew_cauchy(fit.params, w));
  }
  LinePlot plot{title, "wavelength (nm)", "relative intensity", {model, meas}};
  return render_svg(plot);
}

}  // namespace finsim
