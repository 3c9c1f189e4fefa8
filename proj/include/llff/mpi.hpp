#pragma once

#include "llff/geometry.hpp"
#include "llff/image.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace llff {

/// D disparities sampled linearly from 1/z_max (index 0) to 1/z_min (index D-1),
/// endpoints included. D = 1 yields the single plane 1/z_min. z_max may be infinite.
std::vector<double> disparity_planes(int plane_count, double z_min, double z_max);

/// Multiplane image: RGBA planes with straight alpha, plane 0 farthest.
class Mpi {
public:
  Mpi(Camera camera, std::vector<double> disparities, std::vector<ImageRGBA> planes);

  [[nodiscard]] const Camera& camera() const noexcept { return camera_; }
  [[nodiscard]] std::span<const double> disparities() const noexcept { return disparities_; }
  [[nodiscard]] const std::vector<ImageRGBA>& planes() const noexcept { return planes_; }
  [[nodiscard]] int plane_count() const noexcept { return static_cast<int>(planes_.size()); }
  [[nodiscard]] int width() const noexcept { return camera_.width(); }
  [[nodiscard]] int height() const noexcept { return camera_.height(); }
  /// Depth of the nearest plane.
  [[nodiscard]] double z_min() const noexcept { return 1.0 / disparities_.back(); }
  /// Depth of the farthest plane; infinity when its disparity is 0.
  [[nodiscard]] double z_max() const noexcept;

  bool operator==(const Mpi&) const = default;

private:
  Camera camera_;
  std::vector<double> disparities_;
  std::vector<ImageRGBA> planes_;
};

/// Composited colour (premultiplied over black) and accumulated opacity.
struct RenderOutput {
  ImageRGB rgb;
  ImageGray alpha;
};

struct RenderStats {
  std::uint64_t touched_plane_pixels = 0;
  int skipped_planes = 0;
};

/// One back-to-front over step on premultiplied colour.
inline void over_step(float* rgb, float& alpha, const float* premultiplied_rgb, float layer_alpha) noexcept {
  const float keep = 1.0F - layer_alpha;
  for (int c = 0; c < 3; ++c) rgb[c] = premultiplied_rgb[c] + rgb[c] * keep;
  alpha = layer_alpha + alpha * keep;
}

/// Back-to-front over step for a straight-alpha sample.
inline void over_step_straight(float* rgb, float& alpha, const float* straight_rgba) noexcept {
  const float a = straight_rgba[3];
  const float pm[3] = {straight_rgba[0] * a, straight_rgba[1] * a, straight_rgba[2] * a};
  over_step(rgb, alpha, pm, a);
}

/// Bilinear sample of premultiplied RGBA at continuous pixel coordinates (pixel centres at
/// integers). Taps outside the raster read as transparent black.
void sample_premultiplied(const ImageRGBA& image, double u, double v, float out[4]) noexcept;

/// Composites straight-alpha planes ordered far to near.
RenderOutput composite_over(std::span<const ImageRGBA> planes_back_to_front);

/// Warps every plane into `target` through its plane homography and composites far to near.
RenderOutput render_mpi(const Mpi& mpi, const Camera& target);
RenderOutput render_mpi(const Mpi& mpi, const Camera& target, RenderStats& stats);

} // namespace llff
