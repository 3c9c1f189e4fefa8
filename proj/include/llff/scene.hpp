#pragma once

#include "llff/geometry.hpp"
#include "llff/image.hpp"
#include "llff/mpi.hpp"

#include <array>
#include <string>
#include <vector>

namespace llff {

/// Fronto-parallel textured rectangle at world depth z = `depth`, spanning
/// [x0, x1] x [y0, y1]. Texture texels cover the rectangle edge to edge.
struct SceneLayer {
  double depth = 1.0;
  ImageRGBA texture;
  double x0 = -1.0;
  double y0 = -1.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

/// Layers ordered near to far (depths strictly increasing) over an opaque background.
struct LayeredScene {
  std::vector<SceneLayer> layers;
  std::array<float, 3> background{0.0F, 0.0F, 0.0F};

  void validate() const;
};

/// Straight-alpha sample of `layer` along the ray through `pixel`; alpha 0 off the rectangle.
std::array<float, 4> sample_layer(const SceneLayer& layer, const Camera& cam, const Vec2& pixel);

/// Analytic render: background, then every layer far to near with the over operator.
ImageRGB render_layered_scene(const LayeredScene& scene, const Camera& cam);

struct GroundTruthOptions {
  /// Drop samples that nearer layers fully occlude in the reference view.
  bool visible_only = false;
};

/// Writes every layer onto the slice nearest its disparity in the reference frame and
/// the background onto slice 0 (opaque). Throws if a layer lies outside [z_min, z_max].
Mpi build_mpi_groundtruth(const LayeredScene& scene, const Camera& ref, int plane_count, double z_min,
                          double z_max, const GroundTruthOptions& options = {});

/// Scene description: JSON with per-layer depth/extent and a texture PNG path
/// relative to the JSON file.
void save_scene(const LayeredScene& scene, const std::string& json_path);
LayeredScene load_scene(const std::string& json_path);

} // namespace llff
