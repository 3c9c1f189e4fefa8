#include "llff/mpi.hpp"

#include "llff/log.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace llff {

std::vector<double> disparity_planes(int plane_count, double z_min, double z_max) {
  if (plane_count < 1) throw std::invalid_argument("plane count must be >= 1");
  if (!(z_min > 0.0) || !std::isfinite(z_min)) throw std::invalid_argument("z_min must be positive and finite");
  if (!(z_max > z_min)) throw std::invalid_argument("z_max must exceed z_min");
  const double near = 1.0 / z_min;
  const double far = std::isinf(z_max) ? 0.0 : 1.0 / z_max;
  if (plane_count == 1) return {near};
  std::vector<double> d(static_cast<std::size_t>(plane_count));
  for (int i = 0; i < plane_count; ++i) {
    const double t = static_cast<double>(i) / (plane_count - 1);
    d[static_cast<std::size_t>(i)] = far + t * (near - far);
  }
  d.back() = near;
  return d;
}

Mpi::Mpi(Camera camera, std::vector<double> disparities, std::vector<ImageRGBA> planes)
    : camera_{std::move(camera)}, disparities_{std::move(disparities)}, planes_{std::move(planes)} {
  camera_.validate();
  if (planes_.empty()) throw std::invalid_argument("MPI needs at least one plane");
  if (planes_.size() != disparities_.size()) {
    throw std::invalid_argument("MPI plane count does not match disparity count");
  }
  for (std::size_t i = 0; i < disparities_.size(); ++i) {
    if (!std::isfinite(disparities_[i]) || disparities_[i] < 0.0) {
      throw std::invalid_argument("MPI disparities must be finite and >= 0");
    }
    if (i > 0 && !(disparities_[i] > disparities_[i - 1])) {
      throw std::invalid_argument("MPI disparities must be strictly increasing");
    }
  }
  if (!(disparities_.back() > 0.0)) throw std::invalid_argument("nearest MPI plane must have positive disparity");
  for (const auto& plane : planes_) {
    if (!plane.same_shape(camera_.width(), camera_.height())) {
      throw std::invalid_argument("MPI plane dimensions do not match the camera");
    }
    for (float v : plane.data()) {
      if (!(v >= 0.0F && v <= 1.0F)) throw std::invalid_argument("MPI values must lie in [0,1]");
    }
  }
}

double Mpi::z_max() const noexcept {
  return disparities_.front() > 0.0 ? 1.0 / disparities_.front() : std::numeric_limits<double>::infinity();
}

void sample_premultiplied(const ImageRGBA& image, double u, double v, float out[4]) noexcept {
  out[0] = out[1] = out[2] = out[3] = 0.0F;
  const int w = image.width();
  const int h = image.height();
  if (!(u > -1.0 && v > -1.0 && u < w && v < h)) return;
  const double fx0 = std::floor(u);
  const double fy0 = std::floor(v);
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const auto tx = static_cast<float>(u - fx0);
  const auto ty = static_cast<float>(v - fy0);
  const float weights[4] = {(1.0F - tx) * (1.0F - ty), tx * (1.0F - ty), (1.0F - tx) * ty, tx * ty};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (xs[k] < 0 || ys[k] < 0 || xs[k] >= w || ys[k] >= h || weights[k] == 0.0F) continue;
    const auto px = image.pixel(xs[k], ys[k]);
    const float a = px[3];
    const float wa = weights[k] * a;
    out[0] += wa * px[0];
    out[1] += wa * px[1];
    out[2] += wa * px[2];
    out[3] += wa;
  }
}

namespace {

float clamp01(float v) { return std::clamp(v, 0.0F, 1.0F); }

void clamp_output(RenderOutput& out) {
  for (float& v : out.rgb.data()) v = clamp01(v);
  for (float& v : out.alpha.data()) v = clamp01(v);
}

} // namespace

RenderOutput composite_over(std::span<const ImageRGBA> planes) {
  if (planes.empty()) throw std::invalid_argument("composite_over: no planes");
  const int w = planes.front().width();
  const int h = planes.front().height();
  for (const auto& p : planes) {
    if (!p.same_shape(w, h)) throw std::invalid_argument("composite_over: plane dimensions differ");
  }
  RenderOutput out{ImageRGB(w, h), ImageGray(w, h)};
  for (const auto& plane : planes) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        over_step_straight(out.rgb.pixel(x, y).data(), out.alpha.at(x, y), plane.pixel(x, y).data());
      }
    }
  }
  clamp_output(out);
  return out;
}

RenderOutput render_mpi(const Mpi& mpi, const Camera& target) {
  RenderStats stats;
  return render_mpi(mpi, target, stats);
}

RenderOutput render_mpi(const Mpi& mpi, const Camera& target, RenderStats& stats) {
  target.validate();
  const int w = target.width();
  const int h = target.height();
  RenderOutput out{ImageRGB(w, h), ImageGray(w, h)};
  const double focal_ratio = mpi.camera().intrinsics.focal_px / target.intrinsics.focal_px;

  for (int i = 0; i < mpi.plane_count(); ++i) {
    const double disparity = mpi.disparities()[static_cast<std::size_t>(i)];
    const Mat3 forward = plane_homography(mpi.camera(), target, disparity);
    // det(forward) = det(R + d t n^T) * (f_t / f_r)^2; zero when the plane passes through the target centre.
    const double plane_det = forward.determinant() * focal_ratio * focal_ratio;
    if (!(std::abs(plane_det) > 1e-12)) {
      warn("render_mpi: plane " + std::to_string(i) + " passes through the target centre; skipped");
      ++stats.skipped_planes;
      continue;
    }
    const Mat3 inverse = forward.inverse();
    const auto& plane = mpi.planes()[static_cast<std::size_t>(i)];
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Vec3 q = inverse * Vec3{static_cast<double>(x), static_cast<double>(y), 1.0};
        if (!(q.z() > 0.0)) continue;
        float sample[4];
        sample_premultiplied(plane, q.x() / q.z(), q.y() / q.z(), sample);
        over_step(out.rgb.pixel(x, y).data(), out.alpha.at(x, y), sample, sample[3]);
      }
    }
    stats.touched_plane_pixels += static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h);
  }
  clamp_output(out);
  return out;
}

} // namespace llff
