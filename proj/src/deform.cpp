#include "finsim/deform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace finsim {

void validate(const ConstitutiveParams& p) {
  switch (p.model) {
    case ConstitutiveModel::Ogden2:
      require(p.ogden_alpha[0] != 0.0 && p.ogden_alpha[1] != 0.0, ErrorCode::InvalidArgument,
              "Ogden exponents must be non-zero");
      break;
    case ConstitutiveModel::NeoHookean:
      require(p.neo_hookean_c10 > 0.0, ErrorCode::InvalidArgument, "C10 must be positive");
      break;
    case ConstitutiveModel::LinearElastic:
      require(p.youngs_modulus > 0.0, ErrorCode::InvalidArgument, "Young's modulus must be positive");
      require(p.poisson_ratio > -1.0 && p.poisson_ratio < 0.5, ErrorCode::InvalidArgument,
              "Poisson ratio must lie in (-1, 0.5)");
      break;
  }
}

ConstitutiveParams constitutive_preset(std::string_view name) {
  ConstitutiveParams p;
  if (name == "tpu") {
    p.model = ConstitutiveModel::Ogden2;
    p.ogden_mu = {6.279, 1.639};
    p.ogden_alpha = {1.6663, -7.136};
  } else if (name == "pdms") {
    p.model = ConstitutiveModel::NeoHookean;
    p.neo_hookean_c10 = 0.1333;
  } else if (name == "onyx" || name == "petg" || name == "mylar") {
    p.model = ConstitutiveModel::LinearElastic;
    p.youngs_modulus = name == "onyx" ? 2100.0 : name == "petg" ? 2800.0 : 5000.0;
    p.poisson_ratio = name == "petg" ? 0.4 : 0.38;
  } else {
    throw Error(ErrorCode::UnknownPreset, "unknown material preset '" + std::string(name) + "'");
  }
  return p;
}

double strain_energy(const Vec3d& l, const ConstitutiveParams& p) {
  switch (p.model) {
    case ConstitutiveModel::Ogden2: return ogden_energy(l, p);
    case ConstitutiveModel::NeoHookean: return neo_hookean_energy(l, p);
    case ConstitutiveModel::LinearElastic: return linear_elastic_energy(l, p);
  }
  return 0.0;
}

Vec3d strain_energy_gradient(const Vec3d& l, const ConstitutiveParams& p) {
  switch (p.model) {
    case ConstitutiveModel::Ogden2: return ogden_gradient(l, p);
    case ConstitutiveModel::NeoHookean: return neo_hookean_gradient(l, p);
    case ConstitutiveModel::LinearElastic: return linear_elastic_gradient(l, p);
  }
  return Vec3d::Zero();
}

// ---------------------------------------------------------------------------

void validate(const DeformSettings& s) {
  require(s.smoothing_iterations >= 0, ErrorCode::InvalidArgument, "smoothing iterations must be non-negative");
  require(s.smoothing_weight >= 0.0 && s.smoothing_weight <= 1.0, ErrorCode::InvalidArgument,
          "smoothing weight must lie in [0, 1]");
  require(s.contact_margin >= 0.0, ErrorCode::InvalidArgument, "contact margin must be non-negative");
}

Eigen::VectorXd vertex_distances(const TriMesh& surface, const Indenter& indenter) {
  Eigen::VectorXd d(surface.vertex_count());
  for (Eigen::Index v = 0; v < surface.vertex_count(); ++v) d[v] = indenter.signed_distance(surface.vertices.col(v));
  return d;
}

namespace {

double max_penetration(const TriMesh& surface, const Indenter& indenter) {
  return -vertex_distances(surface, indenter).minCoeff();
}

Indenter lowered(const Indenter& ind, double delta) {
  Indenter out = ind;
  out.pose.position.z() -= delta;
  return out;
}

// Offset along -z at which the deepest vertex sits `depth` inside. The
// penetration f(delta) is non-decreasing and 1-Lipschitz in delta, so the
// update delta += depth - f(delta) never overshoots.
double place_indenter(const TriMesh& surface, const Indenter& ind, double depth) {
  double delta = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double gap = depth - max_penetration(surface, lowered(ind, delta));
    if (std::abs(gap) <= 1e-13 * std::max(1.0, depth)) return delta;
    delta += gap;
  }
  // Slow convergence (grazing contact): finish by bisection.
  double lo = delta, hi = delta;
  while (max_penetration(surface, lowered(ind, lo)) > depth) lo -= std::max(1.0, depth);
  while (max_penetration(surface, lowered(ind, hi)) < depth) hi += std::max(1.0, depth);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (max_penetration(surface, lowered(ind, mid)) < depth ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Smallest step s >= 0 along `dir` taking p out of the indenter, returned on
// the outside end of the bracket so the distance there is >= 0.
Vec3d push_out(const Indenter& ind, const Vec3d& p, const Vec3d& dir, double guess) {
  if (ind.signed_distance(p) >= 0.0) return p;
  double lo = 0.0, hi = std::max(guess, 1e-6);
  while (ind.signed_distance(p + hi * dir) < 0.0) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e9, ErrorCode::InvalidArgument, "projection direction never leaves the indenter");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ind.signed_distance(p + mid * dir) < 0.0 ? lo : hi) = mid;
  }
  return p + hi * dir;
}

struct Neighbor {
  int vertex;
  double weight;
};

// Cotangent weights (negative ones clamped to zero) and boundary flags.
void build_laplacian(const TriMesh& m, std::vector<std::vector<Neighbor>>& adj, std::vector<char>& boundary) {
  const auto nv = static_cast<std::size_t>(m.vertex_count());
  std::unordered_map<std::uint64_t, std::pair<double, int>> edges;  // cot sum, use count
  edges.reserve(static_cast<std::size_t>(m.triangle_count()) * 3);
  const auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
  };
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles(k, t), b = m.triangles((k + 1) % 3, t), c = m.triangles((k + 2) % 3, t);
      const Vec3d u = m.vertices.col(a) - m.vertices.col(c), w = m.vertices.col(b) - m.vertices.col(c);
      const double cross = u.cross(w).norm();
      auto& e = edges[key(a, b)];
      e.first += cross > 0.0 ? u.dot(w) / cross : 0.0;
      e.second += 1;
    }
  adj.assign(nv, {});
  boundary.assign(nv, 0);
  for (const auto& [k, e] : edges) {
    const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
    if (e.second == 1) boundary[static_cast<std::size_t>(a)] = boundary[static_cast<std::size_t>(b)] = 1;
    const double w = std::max(0.0, 0.5 * e.first);
    adj[static_cast<std::size_t>(a)].push_back({b, w});
    adj[static_cast<std::size_t>(b)].push_back({a, w});
  }
  // Deterministic neighbour order regardless of hash layout.
  for (auto& list : adj)
    std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
}

}  // namespace

IndentResult indent_surface(const TriMesh& surface, const Indenter& indenter, double depth,
                            const DeformSettings& settings) {
  require(depth >= 0.0 && std::isfinite(depth), ErrorCode::InvalidArgument, "indentation depth must be >= 0");
  validate(settings);
  validate(indenter);
  IndentResult out{surface, indenter, Eigen::VectorXi::Zero(surface.vertex_count()), 0.0};
  if (depth == 0.0 || surface.vertex_count() == 0) return out;

  out.displacement = place_indenter(surface, indenter, depth);
  out.indenter = lowered(indenter, out.displacement);
  const Indenter& ind = out.indenter;

  const Eigen::VectorXd dist = vertex_distances(surface, ind);
  const Eigen::Index inside = (dist.array() < 0.0).count();
  require(2 * inside <= surface.vertex_count(), ErrorCode::IndenterSwallowsMesh,
          std::to_string(inside) + " of " + std::to_string(surface.vertex_count()) +
              " vertices penetrate the indenter");

  const Points3d normals = vertex_normals(surface);
  const auto direction = [&](Eigen::Index v) -> Vec3d {
    if (settings.projection_mode == ProjectionMode::Vertical) return -Vec3d::UnitZ();
    return -normals.col(v);
  };

  std::vector<std::vector<Neighbor>> adj;
  std::vector<char> boundary;
  build_laplacian(surface, adj, boundary);

  const Eigen::Index nv = surface.vertex_count();
  Points3d disp = Points3d::Zero(3, nv);
  std::vector<char> fixed(static_cast<std::size_t>(nv), 0);
  for (Eigen::Index v = 0; v < nv; ++v) {
    if (dist[v] < 0.0) {
      const Vec3d p = surface.vertices.col(v);
      disp.col(v) = push_out(ind, p, direction(v), -dist[v]) - p;
      out.contact[v] = 1;
      fixed[static_cast<std::size_t>(v)] = 1;
    }
    if (boundary[static_cast<std::size_t>(v)]) fixed[static_cast<std::size_t>(v)] = 1;
  }

  // Jacobi sweeps so the result does not depend on vertex order.
  Points3d next = disp;
  const double w = settings.smoothing_weight;
  for (int it = 0; it < settings.smoothing_iterations; ++it) {
    for (Eigen::Index v = 0; v < nv; ++v) {
      if (fixed[static_cast<std::size_t>(v)]) continue;
      Vec3d avg = Vec3d::Zero();
      double wsum = 0.0;
      for (const Neighbor& n : adj[static_cast<std::size_t>(v)]) {
        avg += n.weight * disp.col(n.vertex);
        wsum += n.weight;
      }
      if (wsum > 0.0) next.col(v) = (1.0 - w) * disp.col(v) + w * avg / wsum;
    }
    disp = next;
  }

  out.surface.vertices = surface.vertices + disp;
  // Smoothing may drag a free vertex into the indenter on curved pads.
  for (Eigen::Index v = 0; v < nv; ++v) {
    const Vec3d p = out.surface.vertices.col(v);
    const double d = ind.signed_distance(p);
    if (d < 0.0) {
      out.surface.vertices.col(v) = push_out(ind, p, direction(v), -d);
      out.contact[v] = 1;
    }
  }
  compute_normals(out.surface);
  return out;
}

double bowed_arc_length(double chord, double sagitta) {
  require(chord > 0.0 && sagitta >= 0.0, ErrorCode::InvalidArgument, "chord must be positive, sagitta >= 0");
  if (sagitta == 0.0) return chord;
  const double r = (chord * chord / 4.0 + sagitta * sagitta) / (2.0 * sagitta);
  const double half = std::asin(std::min(1.0, chord / (2.0 * r)));
  // Past a semicircle the arc wraps beyond the chord's half-angle.
  return 2.0 * r * (sagitta > chord / 2.0 ? kPi - half : half);
}

TriMesh deform_mirror(const Rect& mirror, double deflection, int segments_u, int segments_v) {
  require(deflection >= 0.0 && std::isfinite(deflection), ErrorCode::InvalidArgument, "deflection must be >= 0");
  require(deflection <= mirror.half_extents.x(), ErrorCode::InvalidArgument,
          "deflection larger than half the chord is not a bow");
  require(segments_u >= 1 && segments_v >= 1, ErrorCode::InvalidArgument, "need at least one segment per axis");
  const Vec3d u = mirror.axis_u, v = mirror.axis_v(), n = mirror.normal;
  const double half_chord = mirror.half_extents.x();
  TriMesh m;
  const int cu = segments_u + 1, cv = segments_v + 1;
  m.vertices.resize(3, static_cast<Eigen::Index>(cu) * cv);
  double r = 0.0, half_angle = 0.0;
  if (deflection > 0.0) {
    r = (half_chord * half_chord + deflection * deflection) / (2.0 * deflection);
    half_angle = std::asin(std::min(1.0, half_chord / r));
  }
  for (int j = 0; j < cv; ++j)
    for (int i = 0; i < cu; ++i) {
      const double s = -1.0 + 2.0 * i / segments_u, t = -1.0 + 2.0 * j / segments_v;
      double along = s * half_chord, offset = 0.0;
      if (deflection > 0.0) {
        const double th = s * half_angle;
        along = r * std::sin(th);
        offset = r * std::cos(th) - (r - deflection);
      }
      m.vertices.col(i + cu * j) = mirror.center + along * u + t * mirror.half_extents.y() * v - offset * n;
    }
  m.triangles.resize(3, 2 * segments_u * segments_v);
  Eigen::Index k = 0;
  for (int j = 0; j < segments_v; ++j)
    for (int i = 0; i < segments_u; ++i) {
      const int a = i + cu * j, b = a + 1, c = a + 1 + cu, d = a + cu;
      m.triangles.col(k++) << a, b, c;
      m.triangles.col(k++) << a, c, d;
    }
  compute_normals(m);
  return m;
}

void apply_indentation(Scene& scene, const DeformSettings& settings) {
  if (!scene.indent || scene.indent->depth == 0.0) return;
  const IndentResult r = indent_surface(scene.gel_surface, scene.indent->indenter, scene.indent->depth, settings);
  scene.gel_surface = r.surface;
  scene.deformation_source = "approximate-deformer";
  // Probe the deepest contact point.
  const Vec3d c = r.indenter.pose.position;
  Eigen::Index best = -1;
  double best_d = 1e300;
  for (Eigen::Index v = 0; v < r.surface.vertex_count(); ++v)
    if (r.contact[v]) {
      const double d = (r.surface.vertices.col(v).head<2>() - c.head<2>()).squaredNorm();
      if (d < best_d) best_d = d, best = v;
    }
  if (best >= 0) scene.probe_point = r.surface.vertices.col(best);
}

}  // namespace finsim
