#include "llff/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace llff {
namespace {

void require_same_shape(const ImageRGB& a, const ImageRGB& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("images differ in size");
}

double psnr_from_mse(double mse) {
  return mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / mse);
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_kernel() {
  std::array<double, kWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    k[static_cast<std::size_t>(i)] = std::exp(-x * x / (2.0 * kSigma * kSigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

} // namespace

double mean_squared_error(const ImageRGB& a, const ImageRGB& b) {
  require_same_shape(a, b);
  double acc = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    acc += d * d;
  }
  return acc / static_cast<double>(da.size());
}

double psnr(const ImageRGB& a, const ImageRGB& b) { return psnr_from_mse(mean_squared_error(a, b)); }

double psnr(const ImageRGB& a, const ImageRGB& b, const ImageGray& mask) {
  require_same_shape(a, b);
  if (!mask.same_shape(a)) throw std::invalid_argument("mask differs in size");
  double acc = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (!(mask.at(x, y) > 0.0F)) continue;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(a.at(x, y, c)) - b.at(x, y, c);
        acc += d * d;
      }
      n += 3;
    }
  }
  if (n == 0) throw std::invalid_argument("psnr: mask selects no pixels");
  return psnr_from_mse(acc / static_cast<double>(n));
}

ImageGray luma(const ImageRGB& image) {
  ImageGray out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = 0.299F * image.at(x, y, 0) + 0.587F * image.at(x, y, 1) + 0.114F * image.at(x, y, 2);
    }
  }
  return out;
}

double ssim_luma(const ImageGray& a, const ImageGray& b, const ImageGray* mask) {
  if (!a.same_shape(b)) throw std::invalid_argument("images differ in size");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw std::invalid_argument("ssim needs images of at least 11x11 pixels");
  }
  static const auto kernel = gaussian_kernel();
  const int half = kWindow / 2;
  double total = 0.0;
  std::size_t count = 0;
  for (int cy = half; cy < a.height() - half; ++cy) {
    for (int cx = half; cx < a.width() - half; ++cx) {
      if (mask && !(mask->at(cx, cy) > 0.0F)) continue;
      double mu_a = 0.0;
      double mu_b = 0.0;
      double aa = 0.0;
      double bb = 0.0;
      double ab = 0.0;
      for (int j = 0; j < kWindow; ++j) {
        for (int i = 0; i < kWindow; ++i) {
          const double w = kernel[static_cast<std::size_t>(i)] * kernel[static_cast<std::size_t>(j)];
          const double va = a.at(cx - half + i, cy - half + j);
          const double vb = b.at(cx - half + i, cy - half + j);
          mu_a += w * va;
          mu_b += w * vb;
          aa += w * va * va;
          bb += w * vb * vb;
          ab += w * va * vb;
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
               ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("ssim: mask selects no window");
  return total / static_cast<double>(count);
}

double ssim(const ImageRGB& a, const ImageRGB& b) {
  require_same_shape(a, b);
  return ssim_luma(luma(a), luma(b));
}

double ssim(const ImageRGB& a, const ImageRGB& b, const ImageGray& mask) {
  require_same_shape(a, b);
  return ssim_luma(luma(a), luma(b), &mask);
}

double MetricReport::mean_psnr() const {
  if (frames.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : frames) s += f.psnr;
  return s / static_cast<double>(frames.size());
}

double MetricReport::mean_ssim() const {
  if (frames.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : frames) s += f.ssim;
  return s / static_cast<double>(frames.size());
}

void write_metric_csv(std::ostream& out, const MetricReport& report) {
  out << "frame,psnr,ssim\n";
  for (const auto& f : report.frames) out << f.frame << ',' << f.psnr << ',' << f.ssim << '\n';
}

double mean_disparity(double z_min, double z_max) {
  if (!(z_min > 0.0) || !(z_max > z_min)) throw std::invalid_argument("mean_disparity: need 0 < z_min < z_max");
  return 0.5 * (1.0 / z_min + (std::isinf(z_max) ? 0.0 : 1.0 / z_max));
}

ImageRGB lfi_render(std::span<const PosedImage> sources, const Camera& target, double disparity,
                    const NovelViewOptions& options, const GammaInputs& gamma) {
  if (sources.empty()) throw std::invalid_argument("lfi_render: no sources");
  if (!(disparity > 0.0)) throw std::invalid_argument("lfi_render: disparity must be positive");
  std::vector<Pose> poses;
  for (const auto& s : sources) poses.push_back(s.camera.pose);
  const BlendMode mode = sources.size() == 1 ? BlendMode::IrregularExponential : options.mode;
  const auto weights = blend_weights(target.pose, poses, mode, gamma, options.neighbors);

  std::vector<RenderOutput> renders;
  std::vector<double> w;
  for (const auto& e : weights.entries) {
    if (e.weight == 0.0) continue;
    const auto& src = sources[e.mpi_index];
    std::vector<ImageRGBA> plane{with_alpha(src.image)};
    const Mpi single{src.camera, {disparity}, std::move(plane)};
    renders.push_back(render_mpi(single, target));
    w.push_back(e.weight);
  }
  return fuse(renders, w, options.fuse).rgb;
}

AblationMode parse_ablation_mode(std::string_view text) {
  if (text == "single") return AblationMode::Single;
  if (text == "average") return AblationMode::Average;
  if (text == "full") return AblationMode::Full;
  throw std::invalid_argument("unknown ablation mode: " + std::string{text});
}

ImageRGB ablation_render(std::span<const Mpi> mpis, const Camera& target, AblationMode mode,
                         const NovelViewOptions& options) {
  if (mpis.empty()) throw std::invalid_argument("ablation_render: no MPIs");
  switch (mode) {
    case AblationMode::Full:
      return render_novel_view(mpis, target, options).rgb;
    case AblationMode::Average: {
      NovelViewOptions avg = options;
      avg.fuse.ignore_alpha = true;
      return render_novel_view(mpis, target, avg).rgb;
    }
    case AblationMode::Single: {
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < mpis.size(); ++k) {
        const double d = (mpis[k].camera().center() - target.center()).norm();
        if (d < best) {
          best = d;
          nearest = k;
        }
      }
      return render_mpi(mpis[nearest], target).rgb;
    }
  }
  throw std::logic_error("unreachable ablation mode");
}

ImageRGB epipolar_slice(std::span<const ImageRGB> frames, int row) {
  if (frames.empty()) throw std::invalid_argument("epipolar_slice: no frames");
  const int w = frames.front().width();
  const int h = frames.front().height();
  if (row < 0 || row >= h) throw std::out_of_range("epipolar_slice: row " + std::to_string(row) + " out of range");
  ImageRGB out(w, static_cast<int>(frames.size()));
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (!frames[f].same_shape(w, h)) throw std::invalid_argument("epipolar_slice: frame sizes differ");
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, static_cast<int>(f), c) = frames[f].at(x, row, c);
    }
  }
  return out;
}

} // namespace llff
