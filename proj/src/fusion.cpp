#include "llff/fusion.hpp"

#include "llff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace llff {

const char* to_string(BlendMode mode) noexcept {
  return mode == BlendMode::GridBilinear ? "grid-bilinear" : "irregular-exponential";
}

BlendMode parse_blend_mode(std::string_view text) {
  if (text == "grid" || text == "grid-bilinear") return BlendMode::GridBilinear;
  if (text == "irregular" || text == "irregular-exponential") return BlendMode::IrregularExponential;
  throw std::invalid_argument("unknown blend mode: " + std::string{text});
}

double GammaInputs::gamma() const {
  if (!(focal_px > 0.0) || plane_count < 1 || !(z_min > 0.0)) {
    throw std::invalid_argument("gamma needs focal_px > 0, D >= 1, z_min > 0");
  }
  return focal_px / (plane_count * z_min);
}

namespace {

constexpr double kLatticeTol = 1e-6;

struct Axis {
  std::vector<double> values;
  double spacing = 0.0;
};

// Clusters coordinates into sorted unique values and checks uniform spacing.
Axis lattice_axis(std::vector<double> coords) {
  std::sort(coords.begin(), coords.end());
  Axis axis;
  for (double c : coords) {
    if (axis.values.empty() || c - axis.values.back() > kLatticeTol) axis.values.push_back(c);
  }
  if (axis.values.size() < 2) throw ModeError("grid mode needs at least two lattice positions per axis");
  axis.spacing = (axis.values.back() - axis.values.front()) / static_cast<double>(axis.values.size() - 1);
  for (std::size_t i = 0; i < axis.values.size(); ++i) {
    const double expected = axis.values.front() + axis.spacing * static_cast<double>(i);
    if (std::abs(axis.values[i] - expected) > kLatticeTol) {
      throw ModeError("grid mode: poses are not evenly spaced along a lattice axis");
    }
  }
  return axis;
}

std::size_t lattice_index(const Axis& axis, double c) {
  const auto i = static_cast<std::size_t>(std::llround((c - axis.values.front()) / axis.spacing));
  return std::min(i, axis.values.size() - 1);
}

BlendWeights grid_weights(const Vec3& target, std::span<const Pose> poses) {
  Vec3 lo = poses.front().translation;
  Vec3 hi = lo;
  for (const auto& p : poses) {
    lo = lo.cwiseMin(p.translation);
    hi = hi.cwiseMax(p.translation);
  }
  std::vector<int> plane_axes;
  for (int a = 0; a < 3; ++a) {
    if (hi[a] - lo[a] > kLatticeTol) plane_axes.push_back(a);
  }
  if (plane_axes.size() != 2) throw ModeError("grid mode: poses do not span an axis-aligned plane");

  const int ax = plane_axes[0];
  const int ay = plane_axes[1];
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : poses) {
    xs.push_back(p.translation[ax]);
    ys.push_back(p.translation[ay]);
  }
  const Axis gx = lattice_axis(xs);
  const Axis gy = lattice_axis(ys);
  const std::size_t nx = gx.values.size();
  const std::size_t ny = gy.values.size();
  if (nx * ny != poses.size()) throw ModeError("grid mode: lattice is incomplete or has duplicates");

  std::vector<std::ptrdiff_t> cell(nx * ny, -1);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    const std::size_t i = lattice_index(gx, poses[k].translation[ax]);
    const std::size_t j = lattice_index(gy, poses[k].translation[ay]);
    if (std::abs(gx.values[i] - poses[k].translation[ax]) > kLatticeTol ||
        std::abs(gy.values[j] - poses[k].translation[ay]) > kLatticeTol || cell[j * nx + i] >= 0) {
      throw ModeError("grid mode: lattice is incomplete or has duplicates");
    }
    cell[j * nx + i] = static_cast<std::ptrdiff_t>(k);
  }

  auto locate = [](const Axis& axis, double c, std::size_t& i0, double& frac) {
    const double s = (c - axis.values.front()) / axis.spacing;
    const double max_cell = static_cast<double>(axis.values.size() - 2);
    const double base = std::clamp(std::floor(s), 0.0, max_cell);
    i0 = static_cast<std::size_t>(base);
    frac = std::clamp(s - base, 0.0, 1.0);
  };
  std::size_t i0 = 0;
  std::size_t j0 = 0;
  double fx = 0.0;
  double fy = 0.0;
  locate(gx, target[ax], i0, fx);
  locate(gy, target[ay], j0, fy);

  BlendWeights w;
  w.mode = BlendMode::GridBilinear;
  auto corner = [&](std::size_t i, std::size_t j, double weight) {
    w.entries.push_back({static_cast<std::size_t>(cell[j * nx + i]), weight});
  };
  corner(i0, j0, (1.0 - fx) * (1.0 - fy));
  corner(i0 + 1, j0, fx * (1.0 - fy));
  corner(i0, j0 + 1, (1.0 - fx) * fy);
  corner(i0 + 1, j0 + 1, fx * fy);
  return w;
}

} // namespace

BlendWeights blend_weights(const Pose& target, std::span<const Pose> mpi_poses, BlendMode mode,
                           std::optional<GammaInputs> gamma_inputs, int neighbors) {
  if (mpi_poses.empty()) throw std::invalid_argument("blend_weights: no MPI poses");
  if (!target.translation.allFinite()) throw std::invalid_argument("blend_weights: non-finite target translation");
  if (mode == BlendMode::GridBilinear) return grid_weights(target.translation, mpi_poses);

  if (!gamma_inputs) throw std::invalid_argument("irregular blending needs focal_px, D and z_min");
  if (neighbors < 1) throw std::invalid_argument("neighbour count must be >= 1");
  const double gamma = gamma_inputs->gamma();

  std::vector<double> dist(mpi_poses.size());
  for (std::size_t k = 0; k < mpi_poses.size(); ++k) {
    dist[k] = (target.translation - mpi_poses[k].translation).norm();
  }
  std::vector<std::size_t> order(mpi_poses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  const std::size_t k = std::min(order.size(), static_cast<std::size_t>(neighbors));

  BlendWeights w;
  w.mode = BlendMode::IrregularExponential;
  w.gamma = gamma;
  for (std::size_t i = 0; i < k; ++i) w.entries.push_back({order[i], std::exp(-gamma * dist[order[i]])});
  if (!(w.entries.front().weight > 0.0)) {
    // Every weight underflowed; keep the nearest so the blend stays defined.
    w.entries.front().weight = std::numeric_limits<double>::min();
  }
  return w;
}

FusedView fuse(std::span<const RenderOutput> renders, std::span<const double> weights,
               const FuseOptions& options) {
  if (renders.empty()) throw std::invalid_argument("fuse: no renders");
  if (renders.size() != weights.size()) throw std::invalid_argument("fuse: weight count does not match renders");
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("fuse: weights must be finite and >= 0");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw std::invalid_argument("fuse: at least one weight must be positive");
  const int width = renders.front().rgb.width();
  const int height = renders.front().rgb.height();
  for (const auto& r : renders) {
    if (!r.rgb.same_shape(width, height) || !r.alpha.same_shape(width, height)) {
      throw std::invalid_argument("fuse: render dimensions differ");
    }
  }

  FusedView out{ImageRGB(width, height), ImageGray(width, height)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double num[3] = {0.0, 0.0, 0.0};
      double den = 0.0;
      for (std::size_t k = 0; k < renders.size(); ++k) {
        const double a = options.ignore_alpha ? 1.0 : renders[k].alpha.at(x, y);
        const double wa = weights[k] * a;
        for (int c = 0; c < 3; ++c) num[c] += wa * renders[k].rgb.at(x, y, c);
        den += wa;
      }
      if (den >= options.epsilon) {
        for (int c = 0; c < 3; ++c) out.rgb.at(x, y, c) = static_cast<float>(std::clamp(num[c] / den, 0.0, 1.0));
        out.coverage.at(x, y) = static_cast<float>(den);
        continue;
      }
      double fallback[3] = {0.0, 0.0, 0.0};
      for (std::size_t k = 0; k < renders.size(); ++k) {
        for (int c = 0; c < 3; ++c) fallback[c] += weights[k] * renders[k].rgb.at(x, y, c);
      }
      for (int c = 0; c < 3; ++c) {
        out.rgb.at(x, y, c) = static_cast<float>(std::clamp(fallback[c] / weight_sum, 0.0, 1.0));
      }
      out.coverage.at(x, y) = 0.0F;
    }
  }
  return out;
}

FusedView fuse(std::span<const RenderOutput> renders, const BlendWeights& weights, const FuseOptions& options) {
  std::vector<double> w;
  w.reserve(weights.entries.size());
  for (const auto& e : weights.entries) w.push_back(e.weight);
  return fuse(renders, w, options);
}

GammaInputs gamma_inputs_of(const Mpi& mpi) {
  return {mpi.camera().intrinsics.focal_px, mpi.plane_count(), mpi.z_min()};
}

FusedView render_novel_view(std::span<const Mpi> mpis, const Camera& target, const NovelViewOptions& options) {
  if (mpis.empty()) throw std::invalid_argument("render_novel_view: no MPIs");
  std::vector<Pose> poses;
  poses.reserve(mpis.size());
  for (const auto& m : mpis) poses.push_back(m.camera().pose);
  const BlendMode mode = mpis.size() == 1 ? BlendMode::IrregularExponential : options.mode;
  const BlendWeights weights =
      blend_weights(target.pose, poses, mode, gamma_inputs_of(mpis.front()), options.neighbors);

  std::vector<RenderOutput> renders;
  std::vector<double> w;
  for (const auto& e : weights.entries) {
    if (e.weight == 0.0) continue;
    renders.push_back(render_mpi(mpis[e.mpi_index], target));
    w.push_back(e.weight);
  }
  // Fusion is scale invariant in the weights; normalising keeps coverage in [0, 1].
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return fuse(renders, w, options.fuse);
}

} // namespace llff
