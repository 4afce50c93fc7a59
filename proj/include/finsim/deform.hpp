#pragma once

#include "finsim/error.hpp"
#include "finsim/geometry.hpp"
#include "finsim/scene.hpp"

#include <cmath>
#include <string_view>
#include <vector>

namespace finsim {

enum class ConstitutiveModel { Ogden2, NeoHookean, LinearElastic };

struct ConstitutiveParams {
  ConstitutiveModel model = ConstitutiveModel::NeoHookean;
  Eigen::Vector2d ogden_mu = Eigen::Vector2d::Zero();     ///< MPa
  Eigen::Vector2d ogden_alpha = Eigen::Vector2d::Zero();
  double neo_hookean_c10 = 0.0;                            ///< MPa
  double youngs_modulus = 0.0;                             ///< MPa
  double poisson_ratio = 0.0;
};

void validate(const ConstitutiveParams& p);

/// Material presets: tpu (Ogden), pdms (Neo-Hookean), onyx, petg, mylar
/// (linear elastic).
ConstitutiveParams constitutive_preset(std::string_view name);

namespace detail {
template <typename Scalar>
void require_positive(const Vec3<Scalar>& l) {
  using std::isfinite;
  for (int i = 0; i < 3; ++i)
    if (!(l[i] > Scalar(0)) || !isfinite(static_cast<double>(l[i])))
      throw Error(ErrorCode::NonPositiveStretch, "principal stretches must be positive and finite");
}
}  // namespace detail

/// sum_p mu_p / alpha_p (l1^a + l2^a + l3^a - 3)
template <typename Scalar>
Scalar ogden_energy(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  using std::pow;
  detail::require_positive(l);
  Scalar psi(0);
  for (int k = 0; k < 2; ++k) {
    const Scalar a(p.ogden_alpha[k]);
    psi += Scalar(p.ogden_mu[k]) / a * (pow(l[0], a) + pow(l[1], a) + pow(l[2], a) - Scalar(3));
  }
  return psi;
}

template <typename Scalar>
Vec3<Scalar> ogden_gradient(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  using std::pow;
  detail::require_positive(l);
  Vec3<Scalar> g = Vec3<Scalar>::Zero();
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 3; ++i) g[i] += Scalar(p.ogden_mu[k]) * pow(l[i], Scalar(p.ogden_alpha[k] - 1.0));
  return g;
}

/// C10 (l1^2 + l2^2 + l3^2 - 3)
template <typename Scalar>
Scalar neo_hookean_energy(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  detail::require_positive(l);
  return Scalar(p.neo_hookean_c10) * (l.squaredNorm() - Scalar(3));
}

template <typename Scalar>
Vec3<Scalar> neo_hookean_gradient(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  detail::require_positive(l);
  return Scalar(2.0 * p.neo_hookean_c10) * l;
}

/// Small-strain energy on principal engineering strains e = l - 1.
template <typename Scalar>
Scalar linear_elastic_energy(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  detail::require_positive(l);
  const double e_mod = p.youngs_modulus, nu = p.poisson_ratio;
  const Scalar lame(e_mod * nu / ((1 + nu) * (1 - 2 * nu))), mu(e_mod / (2 * (1 + nu)));
  const Vec3<Scalar> e = l - Vec3<Scalar>::Ones();
  return lame / Scalar(2) * e.sum() * e.sum() + mu * e.squaredNorm();
}

template <typename Scalar>
Vec3<Scalar> linear_elastic_gradient(const Vec3<Scalar>& l, const ConstitutiveParams& p) {
  detail::require_positive(l);
  const double e_mod = p.youngs_modulus, nu = p.poisson_ratio;
  const Scalar lame(e_mod * nu / ((1 + nu) * (1 - 2 * nu))), mu(e_mod / (2 * (1 + nu)));
  const Vec3<Scalar> e = l - Vec3<Scalar>::Ones();
  return Vec3<Scalar>::Constant(lame * e.sum()) + Scalar(2) * mu * e;
}

/// Dispatches on `p.model`.
double strain_energy(const Vec3d& stretches, const ConstitutiveParams& p);
Vec3d strain_energy_gradient(const Vec3d& stretches, const ConstitutiveParams& p);

// ---------------------------------------------------------------------------
// Approximate indentation

enum class ProjectionMode { Normal, Vertical };

struct DeformSettings {
  int smoothing_iterations = 25;
  double smoothing_weight = 0.5;
  double contact_margin = 1e-6;
  ProjectionMode projection_mode = ProjectionMode::Normal;
};

void validate(const DeformSettings& s);

struct IndentResult {
  TriMesh surface;
  /// Indenter after its prescribed displacement along -z.
  Indenter indenter;
  /// 1 for vertices pushed out of the indenter, 0 elsewhere.
  Eigen::VectorXi contact;
  double displacement = 0.0;
};

/// Lowers `indenter` along -z until the deepest undeformed vertex sits
/// `depth` inside it, pushes penetrating vertices back to its surface, and
/// spreads that field over the free vertices with cotangent-weighted
/// smoothing. Mesh boundary vertices stay put.
IndentResult indent_surface(const TriMesh& surface, const Indenter& indenter, double depth,
                            const DeformSettings& settings = {});

/// Signed distances of all vertices to the indenter.
Eigen::VectorXd vertex_distances(const TriMesh& surface, const Indenter& indenter);

/// Rectangle bowed into a circular arc along its u axis; the centre line moves
/// `deflection` against the normal while the u-edges stay fixed.
TriMesh deform_mirror(const Rect& mirror, double deflection, int segments_u = 32, int segments_v = 4);

/// Length of a circular arc with the given chord and sagitta.
double bowed_arc_length(double chord, double sagitta);

/// Deforms the scene's gel surface with its indent placement and moves the
/// probe to the contact vertex under the indenter. The indenter keeps its
/// resting pose so the scene can be replayed from its description.
void apply_indentation(Scene& scene, const DeformSettings& settings = {});

}  // namespace finsim
