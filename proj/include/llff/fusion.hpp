#pragma once

#include "llff/geometry.hpp"
#include "llff/image.hpp"
#include "llff/mpi.hpp"

#include <optional>
#include <span>
#include <vector>

namespace llff {

enum class BlendMode { GridBilinear, IrregularExponential };

const char* to_string(BlendMode mode) noexcept;
BlendMode parse_blend_mode(std::string_view text);

/// Inputs of gamma = focal_px / (D * z_min) for exponential weighting.
struct GammaInputs {
  double focal_px = 1.0;
  int plane_count = 1;
  double z_min = 1.0;

  [[nodiscard]] double gamma() const;
};

struct BlendEntry {
  std::size_t mpi_index = 0;
  double weight = 0.0;
};

/// Unnormalised neighbour weights; fuse() performs the normalisation.
struct BlendWeights {
  std::vector<BlendEntry> entries;
  BlendMode mode = BlendMode::IrregularExponential;
  double gamma = 0.0;
};

inline constexpr int kGridNeighbors = 4;
inline constexpr int kIrregularNeighbors = 5;
inline constexpr double kFuseEpsilon = 1e-6;

/// Grid mode: 4 bilinear cell corners of an axis-aligned planar lattice.
/// Irregular mode: the `neighbors` nearest translations, weight exp(-gamma * distance),
/// ties broken by lowest index.
BlendWeights blend_weights(const Pose& target, std::span<const Pose> mpi_poses, BlendMode mode,
                           std::optional<GammaInputs> gamma_inputs = std::nullopt,
                           int neighbors = kIrregularNeighbors);

struct FusedView {
  ImageRGB rgb;
  /// Sum of w * alpha per pixel; 0 marks the unmodulated-weight fallback.
  ImageGray coverage;
};

struct FuseOptions {
  double epsilon = kFuseEpsilon;
  /// Replace every accumulated alpha by 1 (plain weighted average).
  bool ignore_alpha = false;
};

/// Alpha-modulated normalised blend of per-MPI renders: sum(w a C) / sum(w a).
/// `weights[i]` applies to `renders[i]`.
FusedView fuse(std::span<const RenderOutput> renders, std::span<const double> weights,
               const FuseOptions& options = {});
FusedView fuse(std::span<const RenderOutput> renders, const BlendWeights& weights,
               const FuseOptions& options = {});

struct NovelViewOptions {
  BlendMode mode = BlendMode::IrregularExponential;
  int neighbors = kIrregularNeighbors;
  FuseOptions fuse;
};

/// Selects neighbours, renders each through render_mpi, and fuses.
FusedView render_novel_view(std::span<const Mpi> mpis, const Camera& target,
                            const NovelViewOptions& options = {});

/// Gamma inputs derived from an MPI: its focal length, plane count and nearest depth.
GammaInputs gamma_inputs_of(const Mpi& mpi);

} // namespace llff
