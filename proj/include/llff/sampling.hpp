#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace llff {

inline constexpr double kInfiniteDepth = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultEmpiricalDisparity = 64.0;

/// Symbols of the layered plenoptic sampling analysis. Lengths in meters,
/// frequencies in cycles per meter on the sensor.
struct SamplingConfig {
  int planes = 1;                           // D
  int width_px = 1;                         // W
  double focal_m = 1.0;                     // f
  double pixel_size_m = 1.0;                // delta_x
  std::optional<double> sampled_frequency;  // K_x override
  std::optional<double> scene_frequency;    // B_x
  double z_min = 1.0;
  double z_max = kInfiniteDepth;

  void validate() const;
  /// K_x = min(B_x, 1/(2 delta_x)); 1/(2 delta_x) when B_x is absent.
  [[nodiscard]] double effective_frequency() const;
  [[nodiscard]] double focal_px() const { return focal_m / pixel_size_m; }
  /// Pixel disparity of the nearest point for adjacent views `delta_u` apart.
  [[nodiscard]] double max_disparity_px(double delta_u) const;

  /// Config for a camera of horizontal field of view `theta` (radians) and width W,
  /// with the sensor-width-to-focal ratio W*delta_x/f = 2 tan(theta/2).
  static SamplingConfig from_field_of_view(double theta, int width_px, double z_min,
                                           int planes = 1, double z_max = kInfiniteDepth,
                                           double pixel_size_m = 1.5e-6);
};

/// z_min == z_max: the Nyquist interval is unbounded.
double nyquist_interval(const SamplingConfig& cfg);
/// D * nyquist_interval.
double mpi_interval(const SamplingConfig& cfg);
/// Every scene point visible in at least two frustums: W delta_x z_min / (2 f).
double fov_interval(const SamplingConfig& cfg);
/// min(mpi_interval, fov_interval).
double max_interval(const SamplingConfig& cfg);
/// min(D, W/2) pixels.
double disparity_bound(int planes, int width_px);

struct CapturePlanRequest {
  double theta = 0.0;  // radians
  double side_m = 0.0; // S
  double z_min = 1.0;
  std::optional<int> width_px;
  std::optional<int> views;
  double max_empirical_disparity = kDefaultEmpiricalDisparity;
  std::optional<int> max_views;

  void validate() const;
};

struct ViewPosition {
  double x = 0.0;
  double y = 0.0;
};

struct CapturePlan {
  int views = 0;          // N
  int per_side = 0;       // grid is per_side x per_side
  double delta_u = 0.0;   // meters
  int width_px = 0;       // W
  double d_max = 0.0;     // achieved pixel disparity at z_min between adjacent views
  int planes = 0;         // recommended D = ceil(d_max)
  double bound = 0.0;     // right-hand side of W / sqrt(N) <= bound
  std::vector<ViewPosition> positions;
  std::uint64_t render_ops_per_mpi = 0;
  std::uint64_t storage_samples = 0;
};

class InfeasiblePlan : public std::runtime_error {
public:
  InfeasiblePlan(const std::string& what, int minimal_views)
      : std::runtime_error(what), minimal_views_{minimal_views} {}
  [[nodiscard]] int minimal_views() const noexcept { return minimal_views_; }

private:
  int minimal_views_;
};

/// W / sqrt(N) <= 2 * cap * z_min * tan(theta/2) / S.
double capture_bound(double theta, double side_m, double z_min,
                     double max_empirical_disparity = kDefaultEmpiricalDisparity);

/// Solves the free one of (W, N), rounds N up to a perfect square, and places the views
/// at the centres of a per_side x per_side partition of the S x S plane (delta_u = S/per_side).
CapturePlan capture_plan(const CapturePlanRequest& req);

struct Complexity {
  int planes = 0;
  double d_max = 0.0;
  std::uint64_t render_ops_per_mpi = 0;   // W^2 D
  std::uint64_t storage_samples = 0;      // W^2 D N
  double render_ops_closed_form = 0.0;    // W^3 S / (2 sqrt(N) z_min tan(theta/2))
  double storage_closed_form = 0.0;       // N times the above
};

Complexity complexity(int width_px, int views, double side_m, double z_min, double theta);

} // namespace llff
