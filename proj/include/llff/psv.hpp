#pragma once

#include "llff/geometry.hpp"
#include "llff/image.hpp"
#include "llff/mpi.hpp"

#include <span>
#include <vector>

namespace llff {

struct PosedImage {
  Camera camera;
  ImageRGB image;
};

inline constexpr int kPsvViews = 5;

/// Per-view plane sweep volumes in the reference frustum. `colors[v][d]` is source v
/// resampled onto disparity plane d; `valid[v][d]` is 1 where the sample was in bounds.
struct Psv {
  Camera ref_camera;
  std::vector<double> disparities;
  std::vector<std::vector<ImageRGB>> colors;
  std::vector<std::vector<ImageGray>> valid;

  [[nodiscard]] int view_count() const noexcept { return static_cast<int>(colors.size()); }
  [[nodiscard]] int plane_count() const noexcept { return static_cast<int>(disparities.size()); }
};

/// `sources[0]` must be the reference view. Exactly five sources are required unless
/// `allow_degraded` is set, which accepts two to five.
Psv build_psv(const Camera& ref, std::span<const PosedImage> sources, int plane_count, double z_min,
              double z_max, bool allow_degraded = false);

/// Indices of the reference and its nearest neighbours by camera-centre distance.
std::vector<std::size_t> nearest_views(std::span<const PosedImage> views, std::size_t ref_index,
                                       std::size_t count = kPsvViews);

struct PhotoconsistencyOptions {
  /// Softmax temperature in variance units (squared colour).
  double temperature = 1e-4;
  /// Box radius over which per-pixel variances are averaged before the softmax.
  int window_radius = 1;
};

/// Non-learned MPI predictor: depth-wise softmax of negative colour variance across the
/// sweep volumes, converted to alphas whose transmittance-weighted sum is the softmax
/// distribution; colour is the validity-masked mean of the volumes.
Mpi build_mpi_photoconsistency(const Psv& psv, const PhotoconsistencyOptions& options = {});

} // namespace llff
