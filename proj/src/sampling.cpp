#include "llff/sampling.hpp"

#include "llff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace llff {
namespace {

constexpr double kRoundTol = 1e-9;

double inverse_depth(double z) { return std::isinf(z) ? 0.0 : 1.0 / z; }

int ceil_tol(double v) { return static_cast<int>(std::ceil(v - kRoundTol)); }

double focal_px_for(double theta, int width_px) { return width_px / (2.0 * std::tan(0.5 * theta)); }

} // namespace

void SamplingConfig::validate() const {
  if (planes < 1) throw std::invalid_argument("D must be >= 1");
  if (width_px < 1) throw std::invalid_argument("W must be >= 1");
  if (!(focal_m > 0.0) || !(pixel_size_m > 0.0)) throw std::invalid_argument("f and delta_x must be positive");
  if (!(z_min > 0.0) || !std::isfinite(z_min)) throw std::invalid_argument("z_min must be positive and finite");
  if (!(z_max >= z_min)) throw std::invalid_argument("z_max must not be below z_min");
  if (sampled_frequency && !(*sampled_frequency > 0.0)) throw std::invalid_argument("K_x must be positive");
  if (scene_frequency && !(*scene_frequency > 0.0)) throw std::invalid_argument("B_x must be positive");
}

double SamplingConfig::effective_frequency() const {
  const double pixel_limit = 1.0 / (2.0 * pixel_size_m);
  if (sampled_frequency) return *sampled_frequency;
  return scene_frequency ? std::min(*scene_frequency, pixel_limit) : pixel_limit;
}

double SamplingConfig::max_disparity_px(double delta_u) const { return delta_u * focal_m / (pixel_size_m * z_min); }

SamplingConfig SamplingConfig::from_field_of_view(double theta, int width_px, double z_min, int planes,
                                                  double z_max, double pixel_size_m) {
  if (!(theta > 0.0 && theta < M_PI)) throw std::invalid_argument("field of view must lie in (0, pi)");
  SamplingConfig cfg;
  cfg.planes = planes;
  cfg.width_px = width_px;
  cfg.pixel_size_m = pixel_size_m;
  cfg.focal_m = width_px * pixel_size_m / (2.0 * std::tan(0.5 * theta));
  cfg.z_min = z_min;
  cfg.z_max = z_max;
  cfg.validate();
  return cfg;
}

double nyquist_interval(const SamplingConfig& cfg) {
  cfg.validate();
  const double depth_span = 1.0 / cfg.z_min - inverse_depth(cfg.z_max);
  if (!(depth_span > 0.0)) {
    throw DegenerateSceneError("z_min == z_max: the camera sampling interval is unbounded");
  }
  return 1.0 / (2.0 * cfg.effective_frequency() * cfg.focal_m * depth_span);
}

double mpi_interval(const SamplingConfig& cfg) { return cfg.planes * nyquist_interval(cfg); }

double fov_interval(const SamplingConfig& cfg) {
  cfg.validate();
  return cfg.width_px * cfg.pixel_size_m * cfg.z_min / (2.0 * cfg.focal_m);
}

double max_interval(const SamplingConfig& cfg) { return std::min(mpi_interval(cfg), fov_interval(cfg)); }

double disparity_bound(int planes, int width_px) {
  if (planes < 1 || width_px < 1) throw std::invalid_argument("disparity_bound needs D >= 1 and W >= 1");
  return std::min(static_cast<double>(planes), 0.5 * width_px);
}

void CapturePlanRequest::validate() const {
  if (!(theta > 0.0 && theta < M_PI)) throw std::invalid_argument("theta must lie in (0, pi)");
  if (!(side_m > 0.0) || !std::isfinite(side_m)) throw std::invalid_argument("S must be positive");
  if (!(z_min > 0.0) || !std::isfinite(z_min)) throw std::invalid_argument("z_min must be positive");
  if (width_px.has_value() == views.has_value()) {
    throw std::invalid_argument("fix exactly one of W or N");
  }
  if (width_px && *width_px < 1) throw std::invalid_argument("W must be >= 1");
  if (views && *views < 1) throw std::invalid_argument("N must be >= 1");
  if (!(max_empirical_disparity >= 1.0)) throw std::invalid_argument("max empirical disparity must be >= 1");
}

double capture_bound(double theta, double side_m, double z_min, double max_empirical_disparity) {
  return 2.0 * max_empirical_disparity * z_min * std::tan(0.5 * theta) / side_m;
}

CapturePlan capture_plan(const CapturePlanRequest& req) {
  req.validate();
  CapturePlan plan;
  plan.bound = capture_bound(req.theta, req.side_m, req.z_min, req.max_empirical_disparity);

  if (req.width_px) {
    plan.width_px = *req.width_px;
    plan.per_side = std::max(2, ceil_tol(plan.width_px / plan.bound));
    plan.views = plan.per_side * plan.per_side;
    if (req.max_views && plan.views > *req.max_views) {
      throw InfeasiblePlan("W = " + std::to_string(plan.width_px) + " needs at least " +
                               std::to_string(plan.views) + " views (limit " + std::to_string(*req.max_views) + ")",
                           plan.views);
    }
  } else {
    plan.per_side = std::max(2, ceil_tol(std::sqrt(static_cast<double>(*req.views))));
    plan.views = plan.per_side * plan.per_side;
    const double w = std::floor(plan.per_side * plan.bound + kRoundTol);
    if (w < 1.0) {
      const int minimal_side = std::max(2, ceil_tol(1.0 / plan.bound));
      throw InfeasiblePlan("no image width satisfies the disparity cap with N = " + std::to_string(plan.views),
                           minimal_side * minimal_side);
    }
    plan.width_px = static_cast<int>(std::min(w, 1e9));
  }

  plan.delta_u = req.side_m / plan.per_side;
  plan.d_max = plan.delta_u * focal_px_for(req.theta, plan.width_px) / req.z_min;
  plan.planes = std::max(1, ceil_tol(plan.d_max));

  plan.positions.reserve(static_cast<std::size_t>(plan.views));
  for (int j = 0; j < plan.per_side; ++j) {
    for (int i = 0; i < plan.per_side; ++i) {
      plan.positions.push_back({-0.5 * req.side_m + (i + 0.5) * plan.delta_u,
                                -0.5 * req.side_m + (j + 0.5) * plan.delta_u});
    }
  }
  const auto w2 = static_cast<std::uint64_t>(plan.width_px) * static_cast<std::uint64_t>(plan.width_px);
  plan.render_ops_per_mpi = w2 * static_cast<std::uint64_t>(plan.planes);
  plan.storage_samples = plan.render_ops_per_mpi * static_cast<std::uint64_t>(plan.views);
  return plan;
}

Complexity complexity(int width_px, int views, double side_m, double z_min, double theta) {
  if (width_px < 1 || views < 1 || !(side_m > 0.0) || !(z_min > 0.0) || !(theta > 0.0 && theta < M_PI)) {
    throw std::invalid_argument("complexity: invalid arguments");
  }
  Complexity c;
  const double root_n = std::sqrt(static_cast<double>(views));
  const double w = width_px;
  c.d_max = side_m / root_n * focal_px_for(theta, width_px) / z_min;
  c.planes = std::max(1, ceil_tol(c.d_max));
  const auto w2 = static_cast<std::uint64_t>(width_px) * static_cast<std::uint64_t>(width_px);
  c.render_ops_per_mpi = w2 * static_cast<std::uint64_t>(c.planes);
  c.storage_samples = c.render_ops_per_mpi * static_cast<std::uint64_t>(views);
  c.render_ops_closed_form = w * w * w * side_m / (2.0 * root_n * z_min * std::tan(0.5 * theta));
  c.storage_closed_form = c.render_ops_closed_form * views;
  return c;
}

} // namespace llff
