#include "finsim/deform.hpp"
#include "finsim/geometry.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace finsim;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// Closed-form Ogden energy in 50-digit arithmetic, written out by hand.
Big ogden_reference(const std::array<Big, 3>& l, const std::array<Big, 2>& mu, const std::array<Big, 2>& alpha) {
  Big psi = 0;
  for (int p = 0; p < 2; ++p) {
    Big s = -3;
    for (const Big& li : l) s += boost::multiprecision::pow(li, alpha[p]);
    psi += mu[p] / alpha[p] * s;
  }
  return psi;
}

Vec3d central_difference(const std::function<double(const Vec3d&)>& f, const Vec3d& x) {
  constexpr double h = 1e-6;
  Vec3d g;
  for (int i = 0; i < 3; ++i) {
    Vec3d a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

TriMesh flat_face(double w, double l, int nu, int nv) {
  GelPadSpec s;
  s.width = w;
  s.length = l;
  s.cells_u = nu;
  s.cells_v = nv;
  s.cells_w = 1;
  return select_group(generate_gelpad(s).surface, kSensingFace);
}

}  // namespace

TEST_CASE("energies vanish at identity") {
  for (const char* name : {"tpu", "pdms", "onyx", "petg", "mylar"}) {
    const ConstitutiveParams p = constitutive_preset(name);
    CHECK(std::abs(strain_energy(Vec3d::Ones(), p)) < 1e-12);
    if (p.model == ConstitutiveModel::LinearElastic) CHECK(strain_energy_gradient(Vec3d::Ones(), p).norm() == 0.0);
  }
  CHECK(std::abs(ogden_energy(Vec3d(1, 1, 1), constitutive_preset("tpu"))) < 1e-12);
  CHECK(std::abs(neo_hookean_energy(Vec3d(1, 1, 1), constitutive_preset("pdms"))) < 1e-12);
}

TEST_CASE("Neo-Hookean worked example") {
  const double psi = neo_hookean_energy(Vec3d(2, 1, 1), constitutive_preset("pdms"));
  CHECK(std::round(psi * 1e4) / 1e4 == 0.3999);
  CHECK(psi == doctest::Approx(0.3999).epsilon(1e-14));
}

TEST_CASE("presets carry the tabulated constants") {
  const auto tpu = constitutive_preset("tpu");
  CHECK(tpu.ogden_mu == Eigen::Vector2d(6.279, 1.639));
  CHECK(tpu.ogden_alpha == Eigen::Vector2d(1.6663, -7.136));
  CHECK(constitutive_preset("pdms").neo_hookean_c10 == 0.1333);
  CHECK(constitutive_preset("onyx").youngs_modulus == 2100.0);
  CHECK(constitutive_preset("onyx").poisson_ratio == 0.38);
  CHECK(constitutive_preset("petg").youngs_modulus == 2800.0);
  CHECK(constitutive_preset("petg").poisson_ratio == 0.4);
  CHECK(constitutive_preset("mylar").youngs_modulus == 5000.0);
  CHECK(constitutive_preset("mylar").poisson_ratio == 0.38);
  CHECK_THROWS_AS(constitutive_preset("steel"), Error);
}

TEST_CASE("Ogden energy matches a 50-digit evaluation") {
  const auto p = constitutive_preset("tpu");
  const Big l1 = Big(11) / 10;
  const std::array<Big, 3> l = {l1, 1 / l1, Big(1)};
  const std::array<Big, 2> mu = {Big("6.279"), Big("1.639")};
  const std::array<Big, 2> alpha = {Big("1.6663"), Big("-7.136")};
  const double ref = static_cast<double>(ogden_reference(l, mu, alpha));
  CHECK(ogden_energy(Vec3d(1.1, 1 / 1.1, 1.0), p) == doctest::Approx(ref).epsilon(1e-13));

  // Also through the template on the multiprecision type itself.
  const Vec3<Big> lb(l[0], l[1], l[2]);
  ConstitutiveParams exact = p;
  CHECK(static_cast<double>(ogden_energy(lb, exact)) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.8, 1.25);
  for (const char* name : {"tpu", "pdms", "mylar"}) {
    const auto p = constitutive_preset(name);
    for (int i = 0; i < 100; ++i) {
      const Vec3d l(u(rng), u(rng), u(rng));
      const Vec3d g = strain_energy_gradient(l, p);
      const Vec3d fd = central_difference([&](const Vec3d& x) { return strain_energy(x, p); }, l);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  }
  const auto nh = constitutive_preset("pdms");
  const Vec3d l(1.2, 0.9, 1.0);
  const Vec3d fd = central_difference([&](const Vec3d& x) { return neo_hookean_energy(x, nh); }, l);
  CHECK((neo_hookean_gradient(l, nh) - fd).norm() <= 1e-6 * neo_hookean_gradient(l, nh).norm());
}

TEST_CASE("non-negative near identity on the incompressible manifold") {
  // I1 - 3 >= 0 only holds for J = 1, so the third stretch closes the volume.
  ConstitutiveParams stable;
  stable.model = ConstitutiveModel::Ogden2;
  stable.ogden_mu = {2.0, -0.5};
  stable.ogden_alpha = {2.0, -2.0};  // mu_p * alpha_p > 0 for both terms
  for (double a = 0.8; a <= 1.25 + 1e-12; a += 0.025)
    for (double b = 0.8; b <= 1.25 + 1e-12; b += 0.025) {
      const Vec3d l(a, b, 1.0 / (a * b));
      CHECK(neo_hookean_energy(l, constitutive_preset("pdms")) >= -1e-15);
      CHECK(ogden_energy(l, stable) >= -1e-15);
    }
  for (double a = 0.8; a <= 1.25 + 1e-12; a += 0.05)
    for (double b = 0.8; b <= 1.25 + 1e-12; b += 0.05)
      for (double c = 0.8; c <= 1.25 + 1e-12; c += 0.05)
        CHECK(linear_elastic_energy(Vec3d(a, b, c), constitutive_preset("petg")) >= 0.0);
}

TEST_CASE("tabulated TPU constants give an indefinite energy in this form") {
  // sum mu_p alpha_p < 0, so even an isochoric shear lowers the energy.
  const auto p = constitutive_preset("tpu");
  CHECK(p.ogden_mu.dot(p.ogden_alpha) < 0.0);
  CHECK(ogden_energy(Vec3d(1.01, 1.0 / 1.01, 1.0), p) < 0.0);
}

TEST_CASE("non-positive stretches are rejected") {
  try {
    ogden_energy(Vec3d(0, 1, 1), constitutive_preset("tpu"));
    FAIL("expected NonPositiveStretch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveStretch);
  }
  CHECK_THROWS_AS(neo_hookean_energy(Vec3d(1, -1, 1), constitutive_preset("pdms")), Error);
  CHECK_THROWS_AS(strain_energy(Vec3d(1, 1, std::nan("")), constitutive_preset("mylar")), Error);
}

TEST_CASE("zero depth returns the input bitwise") {
  const TriMesh face = flat_face(20, 20, 20, 20);
  const Indenter ind = default_indenter(GelPadSpec{}, IndenterKind::Sphere, Vec3d(5, 0, 0));
  const IndentResult r = indent_surface(face, ind, 0.0);
  CHECK((r.surface.vertices.array() == face.vertices.array()).all());
  CHECK(r.surface.triangles == face.triangles);
}

TEST_CASE("indentation never leaves vertices inside the indenter") {
  const TriMesh face = flat_face(30, 40, 60, 80);
  GelPadSpec spec;
  for (auto kind : {IndenterKind::Cylinder, IndenterKind::Cuboid, IndenterKind::Sphere}) {
    const Vec3d dims = kind == IndenterKind::Cylinder ? Vec3d(10, 40, 0)
                       : kind == IndenterKind::Cuboid ? Vec3d(4, 6, 3)
                                                      : Vec3d(6, 0, 0);
    const Indenter ind = default_indenter(spec, kind, dims);
    for (double depth : {0.5, 1.0, 2.0})
      for (auto mode : {ProjectionMode::Normal, ProjectionMode::Vertical}) {
        DeformSettings s;
        s.projection_mode = mode;
        const IndentResult r = indent_surface(face, ind, depth, s);
        CHECK(vertex_distances(r.surface, r.indenter).minCoeff() >= -1e-6);
        CHECK(r.surface.triangles == face.triangles);
        const double deviation = (face.vertices - r.surface.vertices).colwise().norm().maxCoeff();
        CHECK(deviation == doctest::Approx(depth).epsilon(1e-6));
      }
  }
}

TEST_CASE("cylinder imprint width follows the chord") {
  // 0.2 mm grid across the imprint.
  const TriMesh face = flat_face(20, 30, 100, 150);
  const double r = 10.0;
  const Indenter ind = default_indenter(GelPadSpec{}, IndenterKind::Cylinder, Vec3d(r, 40, 0));
  for (double depth : {0.5, 1.0, 2.0}) {
    const IndentResult res = indent_surface(face, ind, depth);
    double inner = 0.0, outer = 1e9;
    for (Eigen::Index v = 0; v < face.vertex_count(); ++v) {
      const double y = std::abs(face.vertices(1, v));
      if (res.contact[v]) inner = std::max(inner, y);
      else outer = std::min(outer, y);
    }
    const double width = inner + outer;  // midpoint estimate of each edge, doubled
    const double chord = 2 * std::sqrt(r * r - (r - depth) * (r - depth));
    CHECK(std::abs(width - chord) / chord < 0.05);
  }
}

TEST_CASE("sphere imprint is rotationally symmetric") {
  const TriMesh face = flat_face(30, 30, 150, 150);
  const Indenter ind = default_indenter(GelPadSpec{}, IndenterKind::Sphere, Vec3d(6, 0, 0));
  const double depth = 1.0;
  const IndentResult r = indent_surface(face, ind, depth);
  const Eigen::VectorXd dz = face.vertices.row(2) - r.surface.vertices.row(2);

  // Depth of the deformed face at (x, y), interpolated over the undeformed triangles.
  const auto depth_at = [&](const Vec2d& q) {
    for (Eigen::Index t = 0; t < face.triangle_count(); ++t) {
      const Vec2d a = face.vertices.col(face.triangles(0, t)).head<2>();
      const Vec2d b = face.vertices.col(face.triangles(1, t)).head<2>();
      const Vec2d c = face.vertices.col(face.triangles(2, t)).head<2>();
      Eigen::Matrix2d m;
      m << b - a, c - a;
      const Vec2d w = m.inverse() * (q - a);
      if (w.minCoeff() >= -1e-12 && w.sum() <= 1 + 1e-12)
        return (1 - w.sum()) * dz[face.triangles(0, t)] + w[0] * dz[face.triangles(1, t)] +
               w[1] * dz[face.triangles(2, t)];
    }
    return std::nan("");
  };
  for (double rad = 0.5; rad < 8.0; rad += 0.5) {
    std::vector<double> vals;
    for (int a = 0; a < 12; ++a) {
      const double th = a * kPi / 6 + 0.1;
      vals.push_back(depth_at(Vec2d(rad * std::cos(th), rad * std::sin(th))));
    }
    double mean = 0, var = 0;
    for (double x : vals) mean += x;
    mean /= static_cast<double>(vals.size());
    for (double x : vals) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(vals.size()));
    CHECK(sd < 0.01 * depth);
  }
}

TEST_CASE("indentation is continuous in depth") {
  const TriMesh face = flat_face(20, 20, 50, 50);
  const Indenter ind = default_indenter(GelPadSpec{}, IndenterKind::Sphere, Vec3d(5, 0, 0));
  for (double d : {0.5, 1.0, 1.5}) {
    const auto a = indent_surface(face, ind, d), b = indent_surface(face, ind, d + 1e-3);
    CHECK((a.surface.vertices - b.surface.vertices).cwiseAbs().maxCoeff() < 1e-2);
  }
}

TEST_CASE("curved pads and normal projection") {
  GelPadSpec spec;
  spec.family = PadFamily::Ellipsoid;
  spec.cells_u = 40;
  spec.cells_v = 80;
  spec.cells_w = 1;
  const TriMesh face = select_group(generate_gelpad(spec).surface, kSensingFace);
  for (auto kind : {IndenterKind::Cylinder, IndenterKind::Cuboid, IndenterKind::Sphere}) {
    const Vec3d dims = kind == IndenterKind::Cylinder ? Vec3d(10, 40, 0)
                       : kind == IndenterKind::Cuboid ? Vec3d(5, 5, 5)
                                                      : Vec3d(8, 0, 0);
    const IndentResult r = indent_surface(face, default_indenter(spec, kind, dims, 3.0, -5.0), 2.0);
    CHECK(vertex_distances(r.surface, r.indenter).minCoeff() >= -1e-6);
  }
}

TEST_CASE("an indenter covering most of the mesh is a configuration error") {
  const TriMesh face = flat_face(10, 10, 10, 10);
  const Indenter big = default_indenter(GelPadSpec{}, IndenterKind::Cuboid, Vec3d(50, 50, 5));
  try {
    indent_surface(face, big, 1.0);
    FAIL("expected IndenterSwallowsMesh");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndenterSwallowsMesh);
  }
}

TEST_CASE("bowed mirror") {
  Rect m;
  m.center = Vec3d(0, 0, -30);
  m.half_extents = Vec2d(10, 5);
  const TriMesh flat = deform_mirror(m, 0.0);
  CHECK(flat.vertices.row(2).cwiseAbs().maxCoeff() == doctest::Approx(30.0));
  CHECK(flat.vertices.row(2).minCoeff() == doctest::Approx(-30.0));

  double prev = 0.0;
  for (double d : {0.5, 1.0, 2.0, 4.0}) {
    const TriMesh bow = deform_mirror(m, d, 32, 2);  // even segment count puts a vertex on the centre line
    const double mid = bow.vertices.col(16)(2);
    CHECK(mid == doctest::Approx(-30.0 - d).epsilon(1e-13));
    CHECK(bow.vertices.col(0)(2) == doctest::Approx(-30.0));
    const double arc = bowed_arc_length(20.0, d);
    const double r = (100.0 + d * d) / (2 * d);
    CHECK(arc == doctest::Approx(2 * r * std::asin(10.0 / r)));
    CHECK(arc >= 20.0);
    CHECK(arc > prev);
    prev = arc;
    // Polyline length along the centre row approaches the arc.
    double poly = 0.0;
    for (int i = 0; i < 32; ++i) poly += (bow.vertices.col(i + 1) - bow.vertices.col(i)).norm();
    CHECK(poly == doctest::Approx(arc).epsilon(1e-3));
  }
  CHECK(bowed_arc_length(20.0, 0.0) == 20.0);
}
