#pragma once

#include "finsim/mesh.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace finsim {

/// Contents of a neutral mesh file.
///
///     # comment
///     # provenance: external-fem
///     nodes
///     <id> <x> <y> <z>
///     hexes
///     <id> <n1> ... <n8>
///     displacements
///     <node id> <dx> <dy> <dz>
///     triangles
///     <id> <n1> <n2> <n3>
///
/// Ids are arbitrary positive integers; they are remapped to dense indices on
/// read and written back 1-based. `triangles` carries surface meshes (the
/// approximate deformer's output) and may appear instead of `hexes`.
struct NeutralMesh {
  HexMesh hex;
  std::optional<TriMesh> surface;
  std::string provenance;
};

NeutralMesh read_neutral(std::istream& in);
NeutralMesh read_neutral(const std::string& path);

void write_neutral(std::ostream& out, const HexMesh& hex, const std::string& provenance = {});
void write_neutral(std::ostream& out, const TriMesh& surface, const std::string& provenance = {});

struct DeckImport {
  HexMesh hex;
  std::vector<std::string> warnings;
};

/// Reads `*NODE` and `*ELEMENT, TYPE=C3D8R` (also C3D8 / C3D8I) cards from a
/// keyword-style FEM input deck. Every other card is skipped with a warning.
DeckImport read_fem_deck(std::istream& in);
DeckImport read_fem_deck(const std::string& path);

/// Wavefront OBJ (v / vn-free f lines), 1-based indices.
void write_obj(std::ostream& out, const TriMesh& mesh);
void write_obj(const std::string& path, const TriMesh& mesh);

}  // namespace finsim
