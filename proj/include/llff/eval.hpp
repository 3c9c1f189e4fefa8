#pragma once

#include "llff/fusion.hpp"
#include "llff/image.hpp"
#include "llff/mpi.hpp"
#include "llff/psv.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace llff {

/// 10 log10(1 / MSE) over all channels with data range 1; +infinity for identical images.
double psnr(const ImageRGB& a, const ImageRGB& b);
/// PSNR restricted to pixels where `mask` > 0.
double psnr(const ImageRGB& a, const ImageRGB& b, const ImageGray& mask);
double mean_squared_error(const ImageRGB& a, const ImageRGB& b);

/// SSIM on Rec. 601 luma: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// data range 1, averaged over window positions fully inside the image.
double ssim(const ImageRGB& a, const ImageRGB& b);
/// As above, averaged only over windows whose centre pixel has `mask` > 0.
double ssim(const ImageRGB& a, const ImageRGB& b, const ImageGray& mask);
double ssim_luma(const ImageGray& a, const ImageGray& b, const ImageGray* mask = nullptr);

ImageGray luma(const ImageRGB& image);

struct FrameMetric {
  int frame = 0;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct MetricReport {
  std::vector<FrameMetric> frames;

  [[nodiscard]] double mean_psnr() const;
  [[nodiscard]] double mean_ssim() const;
};

/// `frame,psnr,ssim` rows after a header line.
void write_metric_csv(std::ostream& out, const MetricReport& report);

/// (1/z_min + 1/z_max) / 2, with 1/inf = 0.
double mean_disparity(double z_min, double z_max);

/// Light field interpolation: each source reprojected through the plane at
/// `disparity`, then blended with the fusion weights (alpha = validity).
ImageRGB lfi_render(std::span<const PosedImage> sources, const Camera& target, double disparity,
                    const NovelViewOptions& options, const GammaInputs& gamma);

enum class AblationMode { Single, Average, Full };

AblationMode parse_ablation_mode(std::string_view text);

/// Single: nearest MPI only. Average: fuse with alpha replaced by 1. Full: render_novel_view.
ImageRGB ablation_render(std::span<const Mpi> mpis, const Camera& target, AblationMode mode,
                         const NovelViewOptions& options = {});

/// Stacks row `row` of every frame into a (frames x W) image.
ImageRGB epipolar_slice(std::span<const ImageRGB> frames, int row);

} // namespace llff
