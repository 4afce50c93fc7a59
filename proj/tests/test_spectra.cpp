#include "finsim/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace finsim;

namespace {

// Direct transcription of the lobe formula, kept separate from the library.
double lobe(double lambda, double l0, double g, double w, double h) {
  const double x = lambda - l0;
  return h / (g * g + x * x) * (std::atan(w * x / g) / 3.14159265358979323846 + 0.5);
}

SkewCauchyParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> l0(380.0, 720.0), g(5.0, 80.0), w(-5.0, 5.0), h(1.0, 1e4);
  return {l0(rng), g(rng), w(rng), h(rng)};
}

}  // namespace

TEST_CASE("lobe value at the peak parameter is h / (2 gamma^2)") {
  CHECK(eval_skew_cauchy(SkewCauchyParams{600, 10, 2, 200}, 600.0) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_params(rng);
    CHECK(std::abs(eval_skew_cauchy(p, p.lambda0) - p.height / (2 * p.gamma * p.gamma)) < 1e-12);
  }
}

TEST_CASE("zero skew is symmetric about the peak") {
  const SkewCauchyParams p{600, 10, 0, 200};
  CHECK(eval_skew_cauchy(p, 590.0) == eval_skew_cauchy(p, 610.0));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto q = random_params(rng);
    q.omega = 0.0;
    for (double d : {0.5, 7.0, 33.0, 100.0})
      CHECK(std::abs(eval_skew_cauchy(q, q.lambda0 + d) - eval_skew_cauchy(q, q.lambda0 - d)) < 1e-12);
  }
}

TEST_CASE("bracket factor stays inside (0, 1) so the lobe is positive") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_params(rng);
    for (double lam = 200; lam <= 1000; lam += 25) {
      const double f = eval_skew_cauchy(p, lam);
      CHECK(f > 0.0);
      CHECK(f < p.height / (p.gamma * p.gamma + (lam - p.lambda0) * (lam - p.lambda0)));
    }
  }
}

TEST_CASE("sample_model matches per-wavelength closed form") {
  const SkewCauchyParams p{550, 20, 1, 800};
  const SampledSpectrum s = sample_model(p);
  REQUIRE(s.size() == 69);
  for (int i = 0; i < 69; ++i) {
    const double lam = 380.0 + 5.0 * i;
    CHECK(s[i] == doctest::Approx(lobe(lam, 550, 20, 1, 800)).epsilon(1e-14));
    CHECK(s[i] >= 0.0);
  }
}

TEST_CASE("symmetric lobe peaks in the bin holding lambda0") {
  const SampledSpectrum s = sample_model({512.5, 15, 0, 100});
  const int arg = static_cast<int>(std::max_element(s.values().data(), s.values().data() + s.size()) -
                                   s.values().data());
  CHECK(std::abs(s.wavelength(arg) - 512.5) <= 2.5);
}

TEST_CASE("analytic gradient agrees with central differences") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(rng);
    const double lam = p.lambda0 + std::uniform_real_distribution<double>(-60, 60)(rng);
    const Eigen::Vector4d g = skew_cauchy_gradient(p, lam);
    const Eigen::Vector4d x = to_vector(p);
    for (int k = 0; k < 4; ++k) {
      const double step = 1e-6 * std::max(1.0, std::abs(x[k]));
      Eigen::Vector4d xp = x, xm = x;
      xp[k] += step;
      xm[k] -= step;
      const double fd = (eval_skew_cauchy(from_vector(xp), lam) - eval_skew_cauchy(from_vector(xm), lam)) / (2 * step);
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-5).scale(1e-12));
    }
  }
}

TEST_CASE("noiseless fit recovers the generating parameters") {
  for (const SkewCauchyParams truth : {SkewCauchyParams{550, 20, 1, 800}, SkewCauchyParams{612, 35, 3, 2500},
                                       SkewCauchyParams{505, 18, -1.5, 300}}) {
    const SampledSpectrum m = sample_model(truth);
    const FitResult r = fit_spectrum(m, initial_guess(m));
    CHECK(r.converged);
    const Eigen::Vector4d got = to_vector(r.params), want = to_vector(truth);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-4 * std::abs(want[k]));

    // Re-fitting from the answer leaves the residual where it was.
    const FitResult again = fit_spectrum(m, r.params);
    CHECK(std::abs(again.residual - r.residual) < 1e-10);
  }
}

TEST_CASE("noisy fit keeps the peak within 2 nm (median of 20 seeds)") {
  const SkewCauchyParams truth{600, 25, 2, 1250};
  const SampledSpectrum clean = sample_model(truth);
  const double amp = 0.01 * clean.values().maxCoeff();
  std::vector<double> errors;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd v = clean.values();
    for (int i = 0; i < v.size(); ++i) v[i] = std::max(0.0, v[i] + u(rng));
    const SampledSpectrum noisy(clean.grid(), v);
    errors.push_back(std::abs(fit_spectrum(noisy, initial_guess(noisy)).params.lambda0 - truth.lambda0));
  }
  std::nth_element(errors.begin(), errors.begin() + 10, errors.end());
  CHECK(errors[10] < 2.0);
}

TEST_CASE("fit rejects degenerate and undersized input") {
  const SampledSpectrum zero(SpectralGrid::standard());
  CHECK_THROWS_AS(fit_spectrum(zero, {550, 20, 0, 100}), Error);
  try {
    fit_spectrum(zero, {550, 20, 0, 100});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
  const SampledSpectrum tiny(SpectralGrid{500, 530, 5}, Eigen::VectorXd::Ones(7));
  CHECK_THROWS_AS(fit_spectrum(tiny, {510, 20, 0, 100}), Error);
}

TEST_CASE("iteration cap reports an unconverged best-so-far") {
  const SampledSpectrum m = sample_model({612, 35, 3, 2500});
  FitOptions opts;
  opts.max_iterations = 2;
  const FitResult r = fit_spectrum(m, {560, 60, 0, 3000}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(std::isfinite(r.residual));
}

TEST_CASE("fit projects onto the parameter bounds") {
  const SampledSpectrum m = sample_model({400, 3, 0, 20});
  FitOptions opts;
  opts.gamma_min = 10.0;
  const FitResult r = fit_spectrum(m, {420, 30, 0, 200}, opts);
  CHECK(r.params.gamma >= 10.0);
  CHECK(r.params.height > 0.0);
  CHECK(r.params.lambda0 >= kLambda0Min);
}

TEST_CASE("paint presets carry the calibrated Stokes shifts") {
  const auto red = make_paint_preset("red");
  const auto green = make_paint_preset(PaintPreset::Green);
  CHECK(red.stokes_shift == 100.0);
  CHECK(green.stokes_shift == 50.0);
  CHECK(red.absorption.lambda0 == 450.0);
  CHECK(red.emission.lambda0 == 550.0);
  CHECK(green.emission.lambda0 == 500.0);
  CHECK(red.conversion_efficiency >= 0.02);
  CHECK(red.conversion_efficiency <= 0.05);
  CHECK(green.conversion_efficiency == 0.035);
  CHECK(red.base_reflectance.values() == colorchecker_red().values());
  CHECK_THROWS_AS(make_paint_preset("blue"), Error);

  // Red emission reads as red, green as green.
  const Rgb r = spectrum_to_rgb(sample_model(red.emission));
  const Rgb g = spectrum_to_rgb(sample_model(green.emission));
  CHECK(r[0] > r[1]);
  CHECK(r[0] > r[2]);
  CHECK(g[1] > g[0]);
  CHECK(g[1] > g[2]);
}

TEST_CASE("fit_paint pins the emission peak one Stokes shift above absorption") {
  const auto red = make_paint_preset(PaintPreset::Red);
  const SampledSpectrum measured = sample_model({550, 42, 6, 2.0 * 42 * 42});
  const PaintFit fit = fit_paint(PaintPreset::Red, measured);
  CHECK(fit.material.emission.lambda0 == red.absorption.lambda0 + 100.0);
  CHECK(fit.emission_fit.residual < 1e-16);
  CHECK(fit.material.emission.gamma == doctest::Approx(42).epsilon(1e-6));

  // Absorption path: the absorption lobe is fitted, emission follows it.
  const SampledSpectrum abs = sample_model({445, 28, 0.5, 1500});
  const SampledSpectrum em = sample_model({495, 20, 2, 800});
  const PaintFit both = fit_paint(PaintPreset::Green, em, abs);
  REQUIRE(both.absorption_fit);
  CHECK(both.material.absorption.lambda0 == doctest::Approx(445).epsilon(1e-6));
  CHECK(both.material.emission.lambda0 - both.material.absorption.lambda0 == doctest::Approx(50.0));
  CHECK(both.emission_fit.residual < 1e-12);
}

TEST_CASE("spectrum_to_rgb white point, zero, and blue spike") {
  const Rgb white = spectrum_to_rgb(SampledSpectrum::constant(1.0));
  CHECK(white.maxCoeff() / white.minCoeff() < 1.05);
  CHECK(spectrum_to_rgb(SampledSpectrum(SpectralGrid::standard())).isZero(0.0));

  Eigen::VectorXd spike = Eigen::VectorXd::Zero(69);
  spike[(450 - 380) / 5] = 1.0;
  const SampledSpectrum s(SpectralGrid::standard(), spike);
  // CIE 1931 2-degree observer at 450 nm, times the 5 nm bin width.
  const Eigen::Vector3d xyz = spectrum_to_xyz(s);
  CHECK(xyz[0] == doctest::Approx(5 * 0.3362));
  CHECK(xyz[1] == doctest::Approx(5 * 0.038));
  CHECK(xyz[2] == doctest::Approx(5 * 1.77211));
  const Rgb rgb = spectrum_to_rgb(s);
  CHECK(rgb[2] > rgb[0]);
  CHECK(rgb[2] > rgb[1]);

  CHECK_THROWS_AS(spectrum_to_rgb(SampledSpectrum(SpectralGrid{400, 700, 10})), Error);
}

TEST_CASE("spectrum_to_rgb is linear") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd a(69), b(69);
    for (int k = 0; k < 69; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
    }
    const double sa = u(rng), sb = u(rng);
    const SampledSpectrum s1(SpectralGrid::standard(), a), s2(SpectralGrid::standard(), b);
    const Rgb lhs = spectrum_to_rgb(sa * s1 + sb * s2);
    const Rgb rhs = sa * spectrum_to_rgb(s1) + sb * spectrum_to_rgb(s2);
    CHECK((lhs - rhs).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("absorbed fraction of the blue LED by the paint absorption lobe") {
  const auto red = make_paint_preset(PaintPreset::Red);
  const double f = absorbed_fraction(led_spectrum(450.0), red.absorption);
  CHECK(f > 0.5);
  CHECK(f <= 1.0);
  CHECK(absorbed_fraction(led_spectrum(700.0, 5.0), red.absorption) < 0.1);
}

TEST_CASE("measured CSV parsing and resampling") {
  std::istringstream in("wavelength_nm,value\n660,0.1\n405,0.2\n450,1.0\n500,0.5\n532,0.4\n560,0.3\n600,0.25\n630,0.2\n");
  const MeasuredSpectrum m = read_measured_csv(in);
  REQUIRE(m.wavelengths.size() == 8);
  CHECK(std::is_sorted(m.wavelengths.begin(), m.wavelengths.end()));
  const SampledSpectrum s = resample(m);
  CHECK(s.grid().lambda_min == 405.0);
  CHECK(s.grid().lambda_max == 660.0);
  CHECK(s.at(450.0) == doctest::Approx(1.0));
  CHECK(s.at(425.0) == doctest::Approx(0.2 + (1.0 - 0.2) * 20.0 / 45.0));

  std::istringstream empty("wavelength_nm,value\n");
  CHECK_THROWS_AS(read_measured_csv(empty), Error);
  std::istringstream bad_header("lambda,v\n500,1\n");
  CHECK_THROWS_AS(read_measured_csv(bad_header), Error);
}

TEST_CASE("fit report has one row per sample") {
  const SampledSpectrum m = sample_model({550, 20, 1, 800});
  const FitResult r = fit_spectrum(m, initial_guess(m));
  std::ostringstream out;
  write_fit_report(out, m, r);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 69);
  CHECK(text.rfind("# lambda0=", 0) == 0);
  const std::string svg = fit_overlay_svg(m, r, "red paint");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("wavelength (nm)") != std::string::npos);
}
