#include "llff/psv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace llff {
namespace {

// Bilinear sample of an opaque image; false when (u, v) falls outside the pixel-centre hull.
bool sample_rgb(const ImageRGB& image, double u, double v, float out[3]) {
  const int w = image.width();
  const int h = image.height();
  if (!(u >= 0.0 && v >= 0.0 && u <= w - 1 && v <= h - 1)) return false;
  const int x0 = std::min(static_cast<int>(u), w - 1);
  const int y0 = std::min(static_cast<int>(v), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const auto fx = static_cast<float>(u - x0);
  const auto fy = static_cast<float>(v - y0);
  for (int c = 0; c < 3; ++c) {
    const float top = image.at(x0, y0, c) * (1.0F - fx) + image.at(x1, y0, c) * fx;
    const float bottom = image.at(x0, y1, c) * (1.0F - fx) + image.at(x1, y1, c) * fx;
    out[c] = top * (1.0F - fy) + bottom * fy;
  }
  return true;
}

} // namespace

std::vector<std::size_t> nearest_views(std::span<const PosedImage> views, std::size_t ref_index, std::size_t count) {
  if (ref_index >= views.size()) throw std::out_of_range("nearest_views: reference index out of range");
  std::vector<std::size_t> order(views.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const Vec3& c = views[ref_index].camera.center();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (a == ref_index || b == ref_index) return a == ref_index && b != ref_index;
    return (views[a].camera.center() - c).squaredNorm() < (views[b].camera.center() - c).squaredNorm();
  });
  order.resize(std::min(count, order.size()));
  return order;
}

Psv build_psv(const Camera& ref, std::span<const PosedImage> sources, int plane_count, double z_min, double z_max,
              bool allow_degraded) {
  ref.validate();
  const auto n = sources.size();
  if (allow_degraded ? (n < 2 || n > kPsvViews) : n != kPsvViews) {
    throw std::invalid_argument("build_psv needs exactly 5 source views (2-5 in degraded mode), got " +
                                std::to_string(n));
  }
  if (!(sources.front().camera == ref)) throw std::invalid_argument("build_psv: sources[0] must be the reference view");
  for (const auto& s : sources) {
    s.camera.validate();
    if (!s.image.same_shape(s.camera.width(), s.camera.height())) {
      throw std::invalid_argument("build_psv: image size does not match its camera");
    }
  }

  Psv psv;
  psv.ref_camera = ref;
  psv.disparities = disparity_planes(plane_count, z_min, z_max);
  const int w = ref.width();
  const int h = ref.height();
  psv.colors.assign(n, std::vector<ImageRGB>(psv.disparities.size(), ImageRGB(w, h)));
  psv.valid.assign(n, std::vector<ImageGray>(psv.disparities.size(), ImageGray(w, h)));

  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t d = 0; d < psv.disparities.size(); ++d) {
      const Mat3 hmg = plane_homography(ref, sources[v].camera, psv.disparities[d]);
      auto& color = psv.colors[v][d];
      auto& valid = psv.valid[v][d];
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const Vec3 q = hmg * Vec3{static_cast<double>(x), static_cast<double>(y), 1.0};
          if (!(q.z() > 0.0)) continue;
          if (sample_rgb(sources[v].image, q.x() / q.z(), q.y() / q.z(), color.pixel(x, y).data())) {
            valid.at(x, y) = 1.0F;
          }
        }
      }
    }
  }
  return psv;
}

Mpi build_mpi_photoconsistency(const Psv& psv, const PhotoconsistencyOptions& options) {
  if (psv.colors.empty() || psv.disparities.empty()) throw std::invalid_argument("empty plane sweep volume");
  if (!(options.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (options.window_radius < 0) throw std::invalid_argument("window radius must be >= 0");
  const int w = psv.ref_camera.width();
  const int h = psv.ref_camera.height();
  const std::size_t depth_count = psv.disparities.size();
  const std::size_t pixels = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  constexpr double kUndefined = -1.0;

  std::vector<ImageRGBA> planes(depth_count, ImageRGBA(w, h));
  std::vector<double> variance(depth_count * pixels, kUndefined);

  for (std::size_t d = 0; d < depth_count; ++d) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double sum[3] = {0.0, 0.0, 0.0};
        double sum_sq[3] = {0.0, 0.0, 0.0};
        int count = 0;
        for (std::size_t v = 0; v < psv.colors.size(); ++v) {
          if (psv.valid[v][d].at(x, y) <= 0.0F) continue;
          ++count;
          for (int c = 0; c < 3; ++c) {
            const double s = psv.colors[v][d].at(x, y, c);
            sum[c] += s;
            sum_sq[c] += s * s;
          }
        }
        auto texel = planes[d].pixel(x, y);
        if (count == 0) continue;
        for (int c = 0; c < 3; ++c) texel[c] = std::clamp(static_cast<float>(sum[c] / count), 0.0F, 1.0F);
        if (count < 2) continue;
        double var = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double mean = sum[c] / count;
          var += std::max(0.0, sum_sq[c] / count - mean * mean);
        }
        variance[d * pixels + static_cast<std::size_t>(y) * w + x] = var / 3.0;
      }
    }
  }

  const int r = options.window_radius;
  std::vector<double> score(depth_count);
  std::vector<double> prob(depth_count);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool any = false;
      for (std::size_t d = 0; d < depth_count; ++d) {
        const double centre = variance[d * pixels + static_cast<std::size_t>(y) * w + x];
        if (centre == kUndefined) {
          score[d] = -std::numeric_limits<double>::infinity();
          continue;
        }
        double acc = 0.0;
        int n = 0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            const int xx = x + dx;
            const int yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            const double v = variance[d * pixels + static_cast<std::size_t>(yy) * w + xx];
            if (v == kUndefined) continue;
            acc += v;
            ++n;
          }
        }
        score[d] = -acc / n;
        any = true;
      }
      if (!any) continue;

      double best = -std::numeric_limits<double>::infinity();
      double worst = std::numeric_limits<double>::infinity();
      for (double s : score) {
        if (std::isinf(s)) continue;
        best = std::max(best, s);
        worst = std::min(worst, s);
      }
      std::fill(prob.begin(), prob.end(), 0.0);
      if (best - worst <= 1e-12) {
        // Tie: all mass on the farthest defined slice.
        for (std::size_t d = 0; d < depth_count; ++d) {
          if (!std::isinf(score[d])) {
            prob[d] = 1.0;
            break;
          }
        }
      } else {
        double total = 0.0;
        for (std::size_t d = 0; d < depth_count; ++d) {
          prob[d] = std::isinf(score[d]) ? 0.0 : std::exp((score[d] - best) / options.temperature);
          total += prob[d];
        }
        for (double& p : prob) p /= total;
      }

      // Front-to-back: alpha_d = p_d / remaining transmittance, so T_d * alpha_d = p_d.
      double remaining = 1.0;
      for (std::size_t d = depth_count; d-- > 0;) {
        double alpha = 0.0;
        if (prob[d] > 0.0 && remaining > 0.0) alpha = std::clamp(prob[d] / remaining, 0.0, 1.0);
        planes[d].at(x, y, 3) = static_cast<float>(alpha);
        remaining = std::max(0.0, remaining - prob[d]);
      }
    }
  }
  return Mpi{psv.ref_camera, psv.disparities, std::move(planes)};
}

} // namespace llff
