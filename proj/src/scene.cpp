#include "llff/scene.hpp"

#include "llff/image_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace llff {

void LayeredScene::validate() const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (!(l.depth > 0.0) || !std::isfinite(l.depth)) throw std::invalid_argument("layer depth must be positive");
    if (i > 0 && !(l.depth > layers[i - 1].depth)) throw std::invalid_argument("layer depths must be strictly increasing");
    if (!(l.x1 > l.x0) || !(l.y1 > l.y0)) throw std::invalid_argument("layer extent is empty");
    if (l.texture.empty()) throw std::invalid_argument("layer has no texture");
  }
}

std::array<float, 4> sample_layer(const SceneLayer& layer, const Camera& cam, const Vec2& pixel) {
  const auto& k = cam.intrinsics;
  const Vec3 dir = cam.pose.rotation *
                   Vec3{(pixel.x() - k.principal_x) / k.focal_px, (pixel.y() - k.principal_y) / k.focal_px, 1.0};
  const Vec3& origin = cam.pose.translation;
  if (dir.z() == 0.0) return {0.0F, 0.0F, 0.0F, 0.0F};
  const double t = (layer.depth - origin.z()) / dir.z();
  if (!(t > 0.0)) return {0.0F, 0.0F, 0.0F, 0.0F};
  const double wx = origin.x() + t * dir.x();
  const double wy = origin.y() + t * dir.y();
  if (wx < layer.x0 || wx > layer.x1 || wy < layer.y0 || wy > layer.y1) return {0.0F, 0.0F, 0.0F, 0.0F};

  const int tw = layer.texture.width();
  const int th = layer.texture.height();
  const double u = std::clamp((wx - layer.x0) / (layer.x1 - layer.x0) * tw - 0.5, 0.0, tw - 1.0);
  const double v = std::clamp((wy - layer.y0) / (layer.y1 - layer.y0) * th - 0.5, 0.0, th - 1.0);
  const int x0 = std::min(static_cast<int>(u), tw - 1);
  const int y0 = std::min(static_cast<int>(v), th - 1);
  const int x1 = std::min(x0 + 1, tw - 1);
  const int y1 = std::min(y0 + 1, th - 1);
  const auto fx = static_cast<float>(u - x0);
  const auto fy = static_cast<float>(v - y0);
  std::array<float, 4> out{};
  for (int c = 0; c < 4; ++c) {
    const float top = layer.texture.at(x0, y0, c) * (1.0F - fx) + layer.texture.at(x1, y0, c) * fx;
    const float bottom = layer.texture.at(x0, y1, c) * (1.0F - fx) + layer.texture.at(x1, y1, c) * fx;
    out[static_cast<std::size_t>(c)] = top * (1.0F - fy) + bottom * fy;
  }
  return out;
}

ImageRGB render_layered_scene(const LayeredScene& scene, const Camera& cam) {
  scene.validate();
  cam.validate();
  ImageRGB out(cam.width(), cam.height());
  const float background[4] = {scene.background[0], scene.background[1], scene.background[2], 1.0F};
  for (int y = 0; y < cam.height(); ++y) {
    for (int x = 0; x < cam.width(); ++x) {
      float alpha = 0.0F;
      float* rgb = out.pixel(x, y).data();
      over_step_straight(rgb, alpha, background);
      for (auto it = scene.layers.rbegin(); it != scene.layers.rend(); ++it) {
        const auto s = sample_layer(*it, cam, Vec2{static_cast<double>(x), static_cast<double>(y)});
        if (s[3] > 0.0F) over_step_straight(rgb, alpha, s.data());
      }
    }
  }
  return out;
}

namespace {

// Straight-alpha over of `s` onto an existing slice texel.
void over_straight_inplace(std::span<float> texel, const std::array<float, 4>& s) {
  if (texel[3] == 0.0F) {
    for (int c = 0; c < 4; ++c) texel[c] = s[static_cast<std::size_t>(c)];
    return;
  }
  const float keep = texel[3] * (1.0F - s[3]);
  const float alpha = s[3] + keep;
  for (int c = 0; c < 3; ++c) {
    texel[c] = std::clamp((s[static_cast<std::size_t>(c)] * s[3] + texel[c] * keep) / alpha, 0.0F, 1.0F);
  }
  texel[3] = std::clamp(alpha, 0.0F, 1.0F);
}

std::size_t nearest_slice(std::span<const double> disparities, double disparity) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < disparities.size(); ++i) {
    if (std::abs(disparities[i] - disparity) < std::abs(disparities[best] - disparity)) best = i;
  }
  return best;
}

} // namespace

Mpi build_mpi_groundtruth(const LayeredScene& scene, const Camera& ref, int plane_count, double z_min,
                          double z_max, const GroundTruthOptions& options) {
  scene.validate();
  ref.validate();
  auto disparities = disparity_planes(plane_count, z_min, z_max);

  std::vector<std::size_t> slice_of(scene.layers.size());
  for (std::size_t i = 0; i < scene.layers.size(); ++i) {
    const auto& l = scene.layers[i];
    const Vec3 centre{0.5 * (l.x0 + l.x1), 0.5 * (l.y0 + l.y1), l.depth};
    const double z_ref = ref.pose.to_camera(centre).z();
    const double tol = 1e-9 * std::max(1.0, z_ref);
    if (!(z_ref >= z_min - tol) || !(z_ref <= z_max + tol)) {
      std::ostringstream msg;
      msg << "layer " << i << " at depth " << z_ref << " m lies outside [" << z_min << ", " << z_max << "]";
      throw std::invalid_argument(msg.str());
    }
    slice_of[i] = nearest_slice(disparities, 1.0 / z_ref);
  }

  const int w = ref.width();
  const int h = ref.height();
  std::vector<ImageRGBA> planes(disparities.size(), ImageRGBA(w, h));
  const std::array<float, 4> background{scene.background[0], scene.background[1], scene.background[2], 1.0F};

  std::vector<std::array<float, 4>> samples(scene.layers.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 px{static_cast<double>(x), static_cast<double>(y)};
      for (std::size_t i = 0; i < scene.layers.size(); ++i) samples[i] = sample_layer(scene.layers[i], ref, px);

      // Coverage from nearer layers, for visibility culling.
      std::vector<bool> hidden(scene.layers.size() + 1, false);
      if (options.visible_only) {
        float occlusion = 0.0F;
        for (std::size_t i = 0; i < scene.layers.size(); ++i) {
          hidden[i] = occlusion >= 1.0F;
          occlusion = samples[i][3] + occlusion * (1.0F - samples[i][3]);
        }
        hidden.back() = occlusion >= 1.0F;
      }

      if (!hidden.back()) over_straight_inplace(planes.front().pixel(x, y), background);
      for (std::size_t i = scene.layers.size(); i-- > 0;) {
        if (hidden[i] || !(samples[i][3] > 0.0F)) continue;
        over_straight_inplace(planes[slice_of[i]].pixel(x, y), samples[i]);
      }
    }
  }
  return Mpi{ref, std::move(disparities), std::move(planes)};
}

void save_scene(const LayeredScene& scene, const std::string& json_path) {
  scene.validate();
  namespace fs = std::filesystem;
  const fs::path base = fs::path{json_path}.parent_path();
  nlohmann::json doc;
  doc["background"] = scene.background;
  doc["layers"] = nlohmann::json::array();
  for (std::size_t i = 0; i < scene.layers.size(); ++i) {
    const auto& l = scene.layers[i];
    std::ostringstream name;
    name << "layer_" << std::setw(2) << std::setfill('0') << i << ".png";
    write_png((base / name.str()).string(), l.texture);
    doc["layers"].push_back({{"depth", l.depth}, {"extent", {l.x0, l.y0, l.x1, l.y1}}, {"texture", name.str()}});
  }
  std::ofstream out{json_path};
  if (!out) throw std::runtime_error("cannot write " + json_path);
  out << doc.dump(2) << '\n';
}

LayeredScene load_scene(const std::string& json_path) {
  namespace fs = std::filesystem;
  std::ifstream in{json_path};
  if (!in) throw std::runtime_error("cannot open scene file " + json_path);
  const auto doc = nlohmann::json::parse(in);
  LayeredScene scene;
  scene.background = doc.at("background").get<std::array<float, 3>>();
  const fs::path base = fs::path{json_path}.parent_path();
  for (const auto& l : doc.at("layers")) {
    const auto extent = l.at("extent").get<std::array<double, 4>>();
    scene.layers.push_back(SceneLayer{l.at("depth").get<double>(),
                                      read_png((base / l.at("texture").get<std::string>()).string()), extent[0],
                                      extent[1], extent[2], extent[3]});
  }
  scene.validate();
  return scene;
}

} // namespace llff
