#include "llff/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace llff {
namespace {

struct Wave {
  double kx, ky, phase, amplitude;
};

std::vector<Wave> random_waves(std::mt19937_64& rng, int count, double min_wavelength, double max_wavelength) {
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::vector<Wave> waves;
  for (int i = 0; i < count; ++i) {
    const double wavelength = min_wavelength * std::pow(max_wavelength / min_wavelength, unit(rng));
    const double angle = 2.0 * M_PI * unit(rng);
    const double k = 2.0 * M_PI / wavelength;
    waves.push_back({k * std::cos(angle), k * std::sin(angle), 2.0 * M_PI * unit(rng), 0.5 + unit(rng)});
  }
  return waves;
}

double evaluate(const std::vector<Wave>& waves, double x, double y) {
  double v = 0.0;
  double norm = 0.0;
  for (const auto& w : waves) {
    v += w.amplitude * std::sin(w.kx * x + w.ky * y + w.phase);
    norm += w.amplitude;
  }
  return v / norm;
}

} // namespace

ImageRGBA procedural_texture(int width, int height, std::mt19937_64& rng, double min_wavelength,
                             double max_wavelength, double coverage, double contrast) {
  if (!(min_wavelength > 0.0) || !(max_wavelength >= min_wavelength)) {
    throw std::invalid_argument("procedural_texture: bad wavelength band");
  }
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::array<std::vector<Wave>, 3> channels;
  std::array<double, 3> base{};
  for (int c = 0; c < 3; ++c) {
    channels[static_cast<std::size_t>(c)] = random_waves(rng, 10, min_wavelength, max_wavelength);
    base[static_cast<std::size_t>(c)] = 0.3 + 0.4 * unit(rng);
  }
  const auto mask = random_waves(rng, 6, 4.0 * max_wavelength, 10.0 * max_wavelength);
  // Threshold on the roughly uniform-ish mask field: map coverage to a level in [-1, 1].
  const double level = std::clamp(1.0 - 2.0 * coverage, -1.0, 1.0) * 0.45;

  ImageRGBA tex(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = base[static_cast<std::size_t>(c)] + contrast * evaluate(channels[static_cast<std::size_t>(c)], x, y);
        tex.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
      float alpha = 1.0F;
      if (coverage < 1.0) {
        const double m = evaluate(mask, x, y);
        // Two-texel soft edge.
        alpha = static_cast<float>(std::clamp(0.5 + (m - level) * 6.0, 0.0, 1.0));
      }
      tex.at(x, y, 3) = alpha;
    }
  }
  return tex;
}

LayeredScene make_layered_scene(const SyntheticSceneSpec& spec) {
  if (spec.layers < 1) throw std::invalid_argument("scene needs at least one layer");
  if (!(spec.z_far > spec.z_min) && spec.layers > 1) throw std::invalid_argument("z_far must exceed z_min");
  std::mt19937_64 rng{spec.seed};
  LayeredScene scene;
  scene.background = {0.45F, 0.55F, 0.7F};
  for (int i = 0; i < spec.layers; ++i) {
    const double t = spec.layers == 1 ? 0.0 : static_cast<double>(i) / (spec.layers - 1);
    const double disparity = (1.0 - t) / spec.z_min + t / spec.z_far;
    const double depth = 1.0 / disparity;
    // Grow the extent with depth so every layer fills the same angular region.
    const double half = spec.half_extent * depth / spec.z_min + spec.half_extent;
    const double texel = depth / spec.focal_px;
    const int n = std::max(2, static_cast<int>(std::ceil(2.0 * half / texel)));
    const bool last = i == spec.layers - 1;
    SceneLayer layer;
    layer.depth = depth;
    layer.texture = procedural_texture(n, n, rng, spec.min_wavelength_px, spec.max_wavelength_px,
                                       last ? 1.0 : spec.coverage, spec.contrast);
    layer.x0 = -half;
    layer.y0 = -half;
    layer.x1 = half;
    layer.y1 = half;
    scene.layers.push_back(std::move(layer));
  }
  scene.validate();
  return scene;
}

std::vector<Camera> grid_cameras(const Intrinsics& intrinsics, int nx, int ny, double spacing) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs at least one camera per axis");
  std::vector<Camera> cams;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = (i - 0.5 * (nx - 1)) * spacing;
      const double y = (j - 0.5 * (ny - 1)) * spacing;
      cams.push_back(Camera{intrinsics, Pose::translated(Vec3{x, y, 0.0})});
    }
  }
  return cams;
}

double baseline_for_disparity(double d_max, double focal_px, double z_min) { return d_max * z_min / focal_px; }

} // namespace llff
