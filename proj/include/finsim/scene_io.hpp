#pragma once

#include "finsim/deform.hpp"
#include "finsim/scene.hpp"

#include <filesystem>
#include <string>

namespace finsim {

inline constexpr int kSceneSchemaVersion = 1;

/// Scene description as JSON. Geometry that can be regenerated (the gel
/// surface, the bowed mirror) is not stored; the pad spec, indent placement
/// or external mesh path are. Doubles carry 17 significant digits.
std::string scene_to_json(const Scene& scene);

/// Rebuilds a scene from its description. Relative external mesh paths are
/// resolved against `base_dir`. Throws ParseError on malformed input and
/// SceneInvalid on an invalid scene.
Scene scene_from_json(const std::string& text, const std::filesystem::path& base_dir = {},
                      const DeformSettings& deform = {});

void write_scene(const std::string& path, const Scene& scene);
Scene read_scene(const std::string& path, const DeformSettings& deform = {});

/// Regenerates `gel_surface` (and the bowed mirror) from the scene's
/// description: pad spec plus indentation, or the external mesh.
void rebuild_geometry(Scene& scene, const std::filesystem::path& base_dir = {}, const DeformSettings& deform = {});

/// Sensing face of an external FEM result (deformed hex mesh or surface
/// triangles) in the pad frame.
TriMesh import_external_gel(const std::string& path);

}  // namespace finsim
