#pragma once

#include "finsim/error.hpp"
#include "finsim/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finsim {

/// Uniform wavelength grid in nanometres. The default is the 380-720 nm / 5 nm
/// grid every spectrum in the toolkit lives on.
struct SpectralGrid {
  double lambda_min = 380.0;
  double lambda_max = 720.0;
  double step = 5.0;

  static SpectralGrid standard() { return {}; }

  int size() const;
  double wavelength(int i) const { return lambda_min + step * i; }
  bool operator==(const SpectralGrid&) const = default;
};

void validate(const SpectralGrid& grid);

class SampledSpectrum {
 public:
  SampledSpectrum() : SampledSpectrum(SpectralGrid::standard()) {}
  explicit SampledSpectrum(const SpectralGrid& grid);
  SampledSpectrum(const SpectralGrid& grid, Eigen::VectorXd values);

  static SampledSpectrum constant(double value, const SpectralGrid& grid = SpectralGrid::standard());

  const SpectralGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  double wavelength(int i) const { return grid_.wavelength(i); }

  /// Linear interpolation; zero outside the grid.
  double at(double lambda) const;

  SampledSpectrum& operator+=(const SampledSpectrum& rhs);
  SampledSpectrum& operator*=(double s);
  friend SampledSpectrum operator+(SampledSpectrum a, const SampledSpectrum& b) { return a += b; }
  friend SampledSpectrum operator*(SampledSpectrum a, double s) { return a *= s; }
  friend SampledSpectrum operator*(double s, SampledSpectrum a) { return a *= s; }

 private:
  SpectralGrid grid_;
  Eigen::VectorXd values_;
};

/// One lobe of the four-parameter skew Cauchy spectral model: peak wavelength,
/// width, skewness and height.
template <typename Scalar>
struct SkewCauchy {
  Scalar lambda0{};
  Scalar gamma{};
  Scalar omega{};
  Scalar height{};

  bool operator==(const SkewCauchy&) const = default;
};

using SkewCauchyParams = SkewCauchy<double>;

inline constexpr double kLambda0Min = 200.0;
inline constexpr double kLambda0Max = 1000.0;

void validate(const SkewCauchyParams& p);

/// h / (gamma^2 + (lambda - lambda0)^2) * (atan(omega (lambda - lambda0) / gamma) / pi + 1/2)
template <typename Scalar>
Scalar eval_skew_cauchy(const SkewCauchy<Scalar>& p, const Scalar& lambda) {
  using std::atan;
  const Scalar x = lambda - p.lambda0;
  const Scalar pi = Scalar(kPi);
  return p.height / (p.gamma * p.gamma + x * x) * (atan(p.omega * x / p.gamma) / pi + Scalar(0.5));
}

/// Partial derivatives with respect to (lambda0, gamma, omega, height).
Eigen::Vector4d skew_cauchy_gradient(const SkewCauchyParams& p, double lambda);

inline Eigen::Vector4d to_vector(const SkewCauchyParams& p) {
  return {p.lambda0, p.gamma, p.omega, p.height};
}
inline SkewCauchyParams from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

SampledSpectrum sample_model(const SkewCauchyParams& p, const SpectralGrid& grid = SpectralGrid::standard());

struct FitOptions {
  int max_iterations = 200;
  /// Hard constraint used to tie an emission lobe to its absorption lobe.
  std::optional<double> fixed_lambda0;
  double gamma_min = 1e-3;
  double height_min = 1e-12;
};

struct FitResult {
  SkewCauchyParams params;
  /// Sum of squared residuals at `params`.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped least-squares (Levenberg-Marquardt) fit of one lobe to scattered
/// samples. Parameter bounds are enforced by projecting every trial step.
FitResult fit_samples(std::span<const double> wavelengths, std::span<const double> values,
                      const SkewCauchyParams& init, const FitOptions& options = {});

FitResult fit_spectrum(const SampledSpectrum& measured, const SkewCauchyParams& init,
                       const FitOptions& options = {});

/// Moment-free starting point: argmax for the peak, half-width at half-maximum
/// for the width, zero skew.
SkewCauchyParams initial_guess(std::span<const double> wavelengths, std::span<const double> values);
SkewCauchyParams initial_guess(const SampledSpectrum& measured);

struct FluorescentMaterial {
  std::string name;
  SkewCauchyParams absorption;
  SkewCauchyParams emission;
  double stokes_shift = 0.0;
  double conversion_efficiency = 0.035;
  SampledSpectrum base_reflectance;
};

void validate(const FluorescentMaterial& m);

enum class PaintPreset { Red, Green };

PaintPreset parse_paint_preset(std::string_view name);
std::string_view to_string(PaintPreset preset);

inline constexpr double kExcitationWavelength = 450.0;
inline constexpr double kDefaultConversionEfficiency = 0.035;

FluorescentMaterial make_paint_preset(PaintPreset preset);
FluorescentMaterial make_paint_preset(std::string_view name);

double stokes_shift_for(PaintPreset preset);

struct PaintFit {
  FluorescentMaterial material;
  FitResult emission_fit;
  std::optional<FitResult> absorption_fit;
};

/// Calibrates a paint from a measured emission spectrum. Without absorption
/// data the absorption lobe stays at the preset's excitation peak; with it, the
/// absorption lobe is fitted first. Either way the emission peak is pinned to
/// absorption peak + Stokes shift.
PaintFit fit_paint(PaintPreset preset, const SampledSpectrum& emission,
                   const std::optional<SampledSpectrum>& absorption = std::nullopt);

/// Standard ColorChecker patch reflectances on the default grid.
SampledSpectrum colorchecker_red();
SampledSpectrum colorchecker_green();

/// Narrow LED-like emission lobe (Gaussian, unit peak).
SampledSpectrum led_spectrum(double peak_nm = kExcitationWavelength, double sigma_nm = 10.0);

Eigen::Vector3d spectrum_to_xyz(const SampledSpectrum& s);

/// Linear RGB, white balanced so that a unit flat spectrum maps to (1, 1, 1).
/// Linear in the input; components are not clamped.
Rgb spectrum_to_rgb(const SampledSpectrum& s);

/// Rgb divided by its largest component (zero stays zero). Negative
/// components from out-of-gamut spectra are clamped first.
Rgb normalized_color(const Rgb& c);

/// Fraction of a source spectrum's power that falls inside an absorption lobe
/// normalised to unit peak. Always within [0, 1].
double absorbed_fraction(const SampledSpectrum& source, const SkewCauchyParams& absorption);

struct MeasuredSpectrum {
  std::vector<double> wavelengths;
  std::vector<double> values;
};

/// CSV with header `wavelength_nm,value`, rows in any order. Rows come back
/// sorted by wavelength.
MeasuredSpectrum read_measured_csv(std::istream& in);
MeasuredSpectrum read_measured_csv(const std::string& path);

/// Linear interpolation onto the nodes of `grid` that fall inside the
/// measured wavelength range. The result lives on that sub-grid.
SampledSpectrum resample(const MeasuredSpectrum& m, const SpectralGrid& grid = SpectralGrid::standard());

void write_fit_report(std::ostream& out, const SampledSpectrum& measured, const FitResult& fit);
std::string fit_overlay_svg(const SampledSpectrum& measured, const FitResult& fit, const std::string& title);

std::string describe(const SkewCauchyParams& p);

}  // namespace finsim
