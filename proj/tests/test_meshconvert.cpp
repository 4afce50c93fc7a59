#include "finsim/mesh_io.hpp"
#include "finsim/meshconvert.hpp"

#include "mesh_oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace finsim;

namespace {

HexMesh two_hexes_sharing_a_face() { return make_hex_block(2, 1, 1, Vec3d::Zero(), Vec3d(2, 1, 1)); }

int error_code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

}  // namespace

TEST_CASE("boundary extraction counts") {
  CHECK(extract_boundary(make_hex_block(1, 1, 1)).size() == 6);
  CHECK(extract_boundary(two_hexes_sharing_a_face()).size() == 10);

  const HexMesh block = make_hex_block(2, 2, 2, Vec3d::Zero(), Vec3d(2, 2, 2));
  const auto quads = extract_boundary(block);
  CHECK(quads.size() == oracle::brute_force_boundary(block).size());
  CHECK(quads.size() == 2 * (2 * 2 + 2 * 2 + 2 * 2));
}

TEST_CASE("boundary faces carry their owner and outward order") {
  const HexMesh h = make_hex_block(1, 1, 1);
  for (const auto& q : extract_boundary(h)) {
    CHECK(q.element == 0);
    const Vec3d a = h.nodes.col(q.nodes[0]), b = h.nodes.col(q.nodes[1]), c = h.nodes.col(q.nodes[2]);
    const Vec3d n = (b - a).cross(c - a);
    CHECK(n.dot((a + c) / 2 - Vec3d(0.5, 0.5, 0.5)) > 0.0);
  }
}

TEST_CASE("a face shared by three elements is rejected") {
  HexMesh h = make_hex_block(1, 1, 1);
  HexMesh tripled;
  tripled.nodes = h.nodes;
  tripled.elements.resize(8, 3);
  for (int i = 0; i < 3; ++i) tripled.elements.col(i) = h.elements.col(0);
  CHECK(error_code_of([&] { extract_boundary(tripled); }) == static_cast<int>(ErrorCode::NonManifoldInput));
}

TEST_CASE("invalid hex meshes are rejected") {
  HexMesh h = make_hex_block(1, 1, 1);
  HexMesh bad_index = h;
  bad_index.elements(3, 0) = 99;
  CHECK_THROWS_AS(validate(bad_index), Error);
  HexMesh repeated = h;
  repeated.elements(1, 0) = repeated.elements(0, 0);
  CHECK_THROWS_AS(validate(repeated), Error);
  HexMesh inverted = h;
  for (int k = 0; k < 4; ++k) std::swap(inverted.elements(k, 0), inverted.elements(k + 4, 0));
  CHECK_THROWS_AS(validate(inverted), Error);
}

TEST_CASE("triangulation doubles the quads without new vertices") {
  const HexMesh cube = make_hex_block(1, 1, 1);
  const auto quads = extract_boundary(cube);
  const TriangleSoup soup = triangulate_quads(cube, quads);
  CHECK(soup.mesh.triangle_count() == 12);
  CHECK(soup.mesh.vertex_count() == 8);

  const HexMesh block = make_hex_block(2, 2, 2);
  CHECK(triangulate_quads(block, extract_boundary(block)).mesh.triangle_count() == 48);
}

TEST_CASE("fixed diagonal splits n0-n2 and a folded split falls back to n1-n3") {
  HexMesh h;
  h.nodes.resize(3, 4);
  h.nodes << 0, 1, 1, 0,  //
      0, 0, 1, 1,         //
      0, 0, 0, 0;
  const BoundaryQuad convex{{0, 1, 2, 3}, 0, 0};
  TriangleSoup s = triangulate_quads(h, std::span<const BoundaryQuad>(&convex, 1));
  CHECK(s.mesh.triangles.col(0) == Eigen::Vector3i(0, 1, 2));
  CHECK(s.mesh.triangles.col(1) == Eigen::Vector3i(0, 2, 3));

  // Dart: node 1 is reflex, so the 0-2 diagonal lies outside the quad.
  h.nodes << 0, 0.6, 2, 0,  //
      0, 0.6, 2, 2,        //
      0, 0, 0, 0;
  const BoundaryQuad dart{{0, 1, 2, 3}, 0, 0};
  s = triangulate_quads(h, std::span<const BoundaryQuad>(&dart, 1));
  for (Eigen::Index t = 0; t < 2; ++t) {
    const Vec3d a = h.nodes.col(s.mesh.triangles(0, t)), b = h.nodes.col(s.mesh.triangles(1, t)),
                c = h.nodes.col(s.mesh.triangles(2, t));
    CHECK((b - a).cross(c - a).z() * 0.5 > 1e-12);
  }
}

TEST_CASE("oriented surfaces enclose the expected volume") {
  const TriMesh unit = hex_to_surface(make_hex_block(1, 1, 1));
  CHECK(oracle::divergence_volume(unit) == doctest::Approx(1.0).epsilon(1e-14));
  const TriMesh block = hex_to_surface(make_hex_block(2, 2, 2, Vec3d::Zero(), Vec3d(2, 2, 2)));
  CHECK(oracle::divergence_volume(block) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(signed_volume(block) == doctest::Approx(8.0).epsilon(1e-14));
  for (Eigen::Index t = 0; t < block.triangle_count(); ++t)
    CHECK(std::abs(block.normals.col(t).norm() - 1.0) < 1e-9);
}

TEST_CASE("a manually flipped triangle is repaired or rejected") {
  const HexMesh cube = make_hex_block(1, 1, 1);
  const auto quads = extract_boundary(cube);
  TriangleSoup soup = triangulate_quads(cube, quads);
  std::swap(soup.mesh.triangles(1, 5), soup.mesh.triangles(2, 5));
  const std::span<const int> owners(soup.owners.data(), soup.owners.size());

  const OrientResult fixed = orient_consistently(soup.mesh, owners, cube, OrientPolicy::Repair);
  CHECK(fixed.repaired == 1);
  CHECK(signed_volume(fixed.mesh) == doctest::Approx(1.0));
  CHECK(edge_stats(fixed.mesh).inconsistent_edges == 0);

  CHECK(error_code_of([&] { orient_consistently(soup.mesh, owners, cube, OrientPolicy::Strict); }) ==
        static_cast<int>(ErrorCode::OrientationConflict));
}

TEST_CASE("centroid rule disagreeing with edge consistency is a conflict") {
  // Triangle 0 claims to belong to an element sitting outside the cube, so the
  // centroid rule winds it inward and breaks its shared edges.
  HexMesh h = make_hex_block(1, 1, 1);
  HexMesh far = make_hex_block(1, 1, 1, Vec3d(-5, -5, -5), Vec3d(-4, -4, -4));
  HexMesh both;
  both.nodes.resize(3, 16);
  both.nodes << h.nodes, far.nodes;
  both.elements.resize(8, 2);
  both.elements.col(0) = h.elements.col(0);
  both.elements.col(1) = far.elements.col(0).array() + 8;

  const auto quads = extract_boundary(h);
  TriangleSoup soup = triangulate_quads(h, quads);
  Eigen::VectorXi owners = soup.owners;
  // Pick a triangle on the face nearest the far element (z = 0 face).
  owners[0] = 1;
  CHECK(error_code_of([&] {
          orient_consistently(soup.mesh, std::span<const int>(owners.data(), owners.size()), both);
        }) == static_cast<int>(ErrorCode::OrientationConflict));
}

TEST_CASE("apply_displacements") {
  HexMesh h = make_hex_block(2, 2, 1);
  h.displacements = Points3d::Zero(3, h.node_count());
  CHECK(apply_displacements(h).nodes == h.nodes);

  h.displacements = Vec3d(1, 2, 3).replicate(1, h.node_count());
  const HexMesh moved = apply_displacements(h);
  for (Eigen::Index i = 0; i < h.node_count(); ++i) CHECK(moved.nodes.col(i) == h.nodes.col(i) + Vec3d(1, 2, 3));
  CHECK(moved.elements == h.elements);
  CHECK_FALSE(moved.displacements.has_value());

  HexMesh wrong = h;
  wrong.displacements = Points3d::Zero(3, 3);
  CHECK(error_code_of([&] { apply_displacements(wrong); }) == static_cast<int>(ErrorCode::CardinalityMismatch));
  HexMesh none = make_hex_block(1, 1, 1);
  CHECK_THROWS_AS(apply_displacements(none), Error);
}

TEST_CASE("an external indentation field shows up as the surface deviation") {
  HexMesh pad = make_hex_block(10, 10, 2, Vec3d(-5, -5, -2), Vec3d(5, 5, 0));
  Points3d d = Points3d::Zero(3, pad.node_count());
  double max_mag = 0.0;
  for (Eigen::Index i = 0; i < pad.node_count(); ++i) {
    const Vec3d p = pad.nodes.col(i);
    const double depth = 0.8 * std::max(0.0, 1.0 - p.head<2>().squaredNorm() / 9.0) * (p.z() + 2.0) / 2.0;
    d(2, i) = -depth;
    max_mag = std::max(max_mag, depth);
  }
  pad.displacements = d;
  const TriMesh before = hex_to_surface(make_hex_block(10, 10, 2, Vec3d(-5, -5, -2), Vec3d(5, 5, 0)));
  const TriMesh after = hex_to_surface(apply_displacements(pad));
  REQUIRE(after.vertex_count() == before.vertex_count());
  const double deviation = (before.vertices - after.vertices).colwise().norm().maxCoeff();
  CHECK(deviation == doctest::Approx(max_mag).epsilon(1e-12));
}

TEST_CASE("random grids: extraction matches brute force and the surface is a closed sphere") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 12; ++trial) {
    const HexMesh h = oracle::random_affine_grid(rng, dim(rng), dim(rng), dim(rng));
    const auto quads = extract_boundary(h);
    CHECK(oracle::same_face_sets(quads, oracle::brute_force_boundary(h)));
    const TriMesh s = hex_to_surface(h);
    CHECK(s.triangle_count() == 2 * static_cast<Eigen::Index>(quads.size()));
    CHECK(euler_characteristic(s) == 2);
    const EdgeStats es = edge_stats(s);
    CHECK(es.manifold_edges == es.edges);
    CHECK(es.inconsistent_edges == 0);
    for (Eigen::Index v = 0; v < s.vertex_count(); ++v)
      CHECK((s.vertices.col(v).array() == h.nodes.col(s.source_nodes[v]).array()).all());
  }
}

TEST_CASE("planar-faced grids: surface volume equals the summed element volume") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 8; ++trial) {
    const HexMesh h = oracle::random_affine_grid(rng, dim(rng), dim(rng), dim(rng), 0.0);
    const TriMesh s = hex_to_surface(h);
    CHECK(signed_volume(s) == doctest::Approx(total_volume(h)).epsilon(1e-10));
    CHECK(oracle::divergence_volume(s) == doctest::Approx(total_volume(h)).epsilon(1e-10));
  }
}

TEST_CASE("neutral mesh round trip") {
  HexMesh h = make_hex_block(2, 1, 1, Vec3d(0.1, 0.2, 0.3), Vec3d(1.0 / 3.0, 2.0, 3.0));
  h.displacements = Points3d::Random(3, h.node_count());
  std::stringstream ss;
  write_neutral(ss, h, "external-fem");
  const NeutralMesh back = read_neutral(ss);
  CHECK(back.provenance == "external-fem");
  CHECK(back.hex.nodes == h.nodes);
  CHECK(back.hex.elements == h.elements);
  REQUIRE(back.hex.displacements);
  CHECK(*back.hex.displacements == *h.displacements);

  const TriMesh s = hex_to_surface(h);
  std::stringstream ts;
  write_neutral(ts, s, "approximate-deformer");
  const NeutralMesh tb = read_neutral(ts);
  REQUIRE(tb.surface);
  CHECK(tb.provenance == "approximate-deformer");
  CHECK(tb.surface->vertices == s.vertices);
  CHECK(tb.surface->triangles == s.triangles);
}

TEST_CASE("neutral reader handles sparse ids and comments, rejects junk") {
  std::istringstream in(
      "# hand written\nnodes\n10 0 0 0\n20 1 0 0\n30 1 1 0\n40 0 1 0\n"
      "50 0 0 1\n60 1 0 1\n70 1 1 1\n80 0 1 1\nhexes\n7 10 20 30 40 50 60 70 80\n");
  const NeutralMesh m = read_neutral(in);
  CHECK(m.hex.node_count() == 8);
  CHECK(extract_boundary(m.hex).size() == 6);

  std::istringstream bad("nodes\n1 0 0\n");
  CHECK_THROWS_AS(read_neutral(bad), Error);
  std::istringstream unknown("nodes\n1 0 0 0\nhexes\n1 1 2 3 4 5 6 7 8\n");
  CHECK_THROWS_AS(read_neutral(unknown), Error);
  std::istringstream short_disp("nodes\n1 0 0 0\n2 1 0 0\ndisplacements\n1 0 0 0\n");
  CHECK_THROWS_AS(read_neutral(short_disp), Error);
}

TEST_CASE("FEM deck subset reader") {
  std::istringstream deck(
      "*HEADING\nfin ray pad\n** comment\n*NODE\n1, 0.0, 0.0, 0.0\n2, 1.0, 0.0, 0.0\n3, 1.0, 1.0, 0.0\n"
      "4, 0.0, 1.0, 0.0\n5, 0.0, 0.0, 1.0\n6, 1.0, 0.0, 1.0\n7, 1.0, 1.0, 1.0\n8, 0.0, 1.0, 1.0\n"
      "*ELEMENT, TYPE=C3D8R, ELSET=PAD\n1, 1, 2, 3, 4,\n5, 6, 7, 8\n"
      "*ELEMENT, TYPE=R3D4\n2, 1, 2, 3, 4\n*MATERIAL, NAME=PDMS\n*HYPERELASTIC, NEO HOOKE\n0.1333, 0.0\n");
  const DeckImport d = read_fem_deck(deck);
  CHECK(d.hex.node_count() == 8);
  CHECK(d.hex.element_count() == 1);
  CHECK(d.warnings.size() == 4);
  CHECK(signed_volume(hex_to_surface(d.hex)) == doctest::Approx(1.0));
}

TEST_CASE("OBJ export lists vertices then faces") {
  const TriMesh s = hex_to_surface(make_hex_block(1, 1, 1));
  std::ostringstream out;
  write_obj(out, s);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), 'v') >= 8);
  CHECK(text.find("\nf ") != std::string::npos);
}
