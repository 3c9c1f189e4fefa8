#pragma once

#include "llff/geometry.hpp"
#include "llff/image.hpp"
#include "llff/scene.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace llff {

/// Smooth random colour texture: a sum of oriented sinusoids with wavelengths in
/// [min_wavelength, max_wavelength] texels. With `coverage` < 1 the alpha channel is a
/// thresholded low-frequency field keeping roughly that fraction opaque. `contrast` scales
/// the normalized wave sum (peak +-1) before clamping to [0, 1].
ImageRGBA procedural_texture(int width, int height, std::mt19937_64& rng, double min_wavelength,
                             double max_wavelength, double coverage = 1.0, double contrast = 0.8);

struct SyntheticSceneSpec {
  int layers = 4;
  std::uint64_t seed = 7;
  double z_min = 1.0;
  /// Depth of the farthest layer; the background sits at infinity.
  double z_far = 5.0;
  /// Half-extent of the region (meters, at depth z_min) the layers must cover.
  double half_extent = 1.0;
  /// Texel footprint in pixels of a camera with this focal length.
  double focal_px = 100.0;
  double min_wavelength_px = 4.0;
  double max_wavelength_px = 16.0;
  double contrast = 0.8;
  /// Opaque fraction of every layer except the farthest, which is fully opaque.
  double coverage = 0.55;
};

/// Layers spaced evenly in disparity between z_min and z_far.
LayeredScene make_layered_scene(const SyntheticSceneSpec& spec);

/// nx * ny identity-rotation cameras on the z = 0 plane, centred on the origin, row-major.
std::vector<Camera> grid_cameras(const Intrinsics& intrinsics, int nx, int ny, double spacing);

/// Baseline producing `d_max` pixels of disparity at depth z_min.
double baseline_for_disparity(double d_max, double focal_px, double z_min);

} // namespace llff
