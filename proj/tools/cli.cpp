#include "cli.hpp"

#include "llff/bundle.hpp"
#include "llff/errors.hpp"
#include "llff/eval.hpp"
#include "llff/fusion.hpp"
#include "llff/image_io.hpp"
#include "llff/mpi.hpp"
#include "llff/psv.hpp"
#include "llff/sampling.hpp"
#include "llff/scene.hpp"
#include "llff/synthetic.hpp"
#include "llff/view_path.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace llff::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kDeg = M_PI / 180.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad flag combinations the parser cannot express; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string numbered(const std::string& stem, std::size_t i, const std::string& ext = ".png") {
  std::ostringstream s;
  s << stem << std::setw(4) << std::setfill('0') << i << ext;
  return s.str();
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out{tmp};
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
  fs::rename(tmp, path);
}

std::string full_precision(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

double parse_depth(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw UsageError("not a number: " + text);
  return v;
}

// All `mpi_XXXX/mpi.bin` bundles under `dir`, in name order.
std::vector<fs::path> bundle_dirs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("no such MPI directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && e.path().filename().string().rfind("mpi_", 0) == 0 && fs::exists(e.path() / "mpi.bin")) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::runtime_error("no mpi_*/mpi.bin bundles in " + dir.string());
  return out;
}

std::vector<Mpi> load_mpis(const fs::path& dir) {
  std::vector<Mpi> out;
  for (const auto& d : bundle_dirs(dir)) {
    try {
      out.push_back(import_mpi((d / "mpi.bin").string()));
    } catch (const FormatError& e) {
      throw FormatError((d / "mpi.bin").string() + ": " + e.message(), e.offset(), e.unit());
    }
  }
  return out;
}

std::vector<PosedImage> load_views(const fs::path& poses, const fs::path& images) {
  const auto cams = read_pose_file(poses.string());
  std::vector<PosedImage> views;
  for (std::size_t i = 0; i < cams.size(); ++i) {
    const auto path = images / numbered("view_", i);
    auto rgb = rgb_of(read_png(path.string()));
    if (!rgb.same_shape(cams[i].width(), cams[i].height())) {
      throw std::runtime_error(path.string() + " does not match its camera size");
    }
    views.push_back({cams[i], std::move(rgb)});
  }
  return views;
}

// Enum flags parse here so a bad name is a usage error rather than a data error.
BlendMode blend_flag(const std::string& text) {
  try {
    return parse_blend_mode(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

NovelViewOptions view_options(const std::string& blend) {
  NovelViewOptions opt;
  opt.mode = blend_flag(blend);
  opt.neighbors = opt.mode == BlendMode::GridBilinear ? kGridNeighbors : kIrregularNeighbors;
  return opt;
}

// ---- plan ----------------------------------------------------------------

struct PlanArgs {
  double theta_deg = 0.0;
  double side = 0.0;
  double z_min = 0.0;
  std::optional<int> width;
  std::optional<int> views;
  std::optional<int> max_views;
  double max_disparity = kDefaultEmpiricalDisparity;
  std::string positions;
};

int run_plan(const PlanArgs& a, std::ostream& out) {
  CapturePlanRequest req;
  req.theta = a.theta_deg * kDeg;
  req.side_m = a.side;
  req.z_min = a.z_min;
  req.width_px = a.width;
  req.views = a.views;
  req.max_views = a.max_views;
  req.max_empirical_disparity = a.max_disparity;
  const auto plan = capture_plan(req);
  out << "views=" << plan.views << '\n'
      << "grid=" << plan.per_side << 'x' << plan.per_side << '\n'
      << "delta_u_m=" << full_precision(plan.delta_u) << '\n'
      << "width_px=" << plan.width_px << '\n'
      << "d_max_px=" << full_precision(plan.d_max) << '\n'
      << "planes=" << plan.planes << '\n'
      << "bound=" << full_precision(plan.bound) << '\n'
      << "render_ops_per_mpi=" << plan.render_ops_per_mpi << '\n'
      << "storage_samples=" << plan.storage_samples << '\n';
  if (!a.positions.empty()) {
    std::ostringstream csv;
    for (const auto& p : plan.positions) csv << full_precision(p.x) << ',' << full_precision(p.y) << '\n';
    write_text_atomic(a.positions, csv.str());
  }
  return kExitOk;
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out;
  SyntheticSceneSpec spec;
  int width = 128;
  int height = 96;
  double focal = 100.0;
  int grid = 3;
  double d_max = 32.0;
  int targets = 16;
};

int run_synth(SynthArgs a, std::ostream& out) {
  if (a.width < 1 || a.height < 1 || a.grid < 1 || !(a.focal > 0.0) || !(a.d_max > 0.0) || a.targets < 0) {
    throw UsageError("synth: sizes, grid, focal and d-max must be positive");
  }
  a.spec.focal_px = a.focal;
  const fs::path root{a.out};
  fs::create_directories(root / "scene");
  fs::create_directories(root / "images");
  fs::create_directories(root / "truth");
  const auto scene = make_layered_scene(a.spec);
  save_scene(scene, (root / "scene" / "scene.json").string());

  const Intrinsics k = Intrinsics::centered(a.width, a.height, a.focal);
  const double baseline = baseline_for_disparity(a.d_max, a.focal, a.spec.z_min);
  const auto cams = grid_cameras(k, a.grid, a.grid, baseline);
  write_pose_file((root / "poses.txt").string(), cams);
  for (std::size_t i = 0; i < cams.size(); ++i) {
    write_png((root / "images" / numbered("view_", i)).string(), render_layered_scene(scene, cams[i]));
  }

  // Held-out targets strictly inside the grid footprint.
  std::mt19937_64 rng{a.spec.seed + 1};
  const double half = 0.5 * (a.grid - 1) * baseline;
  std::uniform_real_distribution<double> u{-half, half};
  std::vector<Camera> targets;
  for (int i = 0; i < a.targets; ++i) targets.push_back(Camera{k, Pose::translated(Vec3{u(rng), u(rng), 0.0})});
  write_pose_file((root / "targets.txt").string(), targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    write_png((root / "truth" / numbered("frame_", i)).string(), render_layered_scene(scene, targets[i]));
  }
  out << "views=" << cams.size() << '\n' << "baseline_m=" << full_precision(baseline) << '\n'
      << "targets=" << targets.size() << '\n';
  return kExitOk;
}

// ---- build ---------------------------------------------------------------

struct BuildArgs {
  std::string poses;
  std::string images;
  std::string scene;
  std::string out;
  int planes = 32;
  double z_min = 1.0;
  std::string z_max = "inf";
  int margin = 0;
  double temperature = PhotoconsistencyOptions{}.temperature;
};

int run_build(const BuildArgs& a, std::ostream& out) {
  if (a.planes < 1) throw UsageError("build: --planes must be >= 1");
  if (a.margin < 0) throw UsageError("build: --margin must be >= 0");
  const double z_max = parse_depth(a.z_max);
  const auto cams = read_pose_file(a.poses);
  if (cams.empty()) throw std::runtime_error("pose file has no cameras: " + a.poses);

  std::vector<PosedImage> views;
  std::optional<LayeredScene> scene;
  if (a.scene.empty()) {
    if (a.images.empty()) throw UsageError("build: need --images or --ground-truth");
    if (a.margin != 0) throw UsageError("build: --margin only applies to --ground-truth");
    views = load_views(a.poses, a.images);
    if (views.size() < 2) throw std::runtime_error("build: the photoconsistency builder needs at least 2 views");
  } else {
    scene = load_scene(a.scene);
  }

  fs::create_directories(a.out);
  PhotoconsistencyOptions pc;
  pc.temperature = a.temperature;
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < cams.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      Mpi mpi = [&] {
        if (scene) {
          Camera ref = cams[i];
          ref.intrinsics.width_px += 2 * a.margin;
          ref.intrinsics.height_px += 2 * a.margin;
          ref.intrinsics.principal_x += a.margin;
          ref.intrinsics.principal_y += a.margin;
          return build_mpi_groundtruth(*scene, ref, a.planes, a.z_min, z_max);
        }
        const auto idx = nearest_views(views, i, kPsvViews);
        std::vector<PosedImage> sources;
        for (auto j : idx) sources.push_back(views[j]);
        const bool degraded = sources.size() < static_cast<std::size_t>(kPsvViews);
        return build_mpi_photoconsistency(build_psv(cams[i], sources, a.planes, a.z_min, z_max, degraded), pc);
      }();
      const fs::path dir = fs::path{a.out} / numbered("mpi_", i, "");
      fs::create_directories(dir);
      export_mpi(mpi, (dir / "mpi.bin").string());
      const std::string source = scene ? a.scene : (fs::path{a.images} / numbered("view_", i)).string();
      write_bundle_meta((dir / "meta.txt").string(), BundleMeta{a.z_min, z_max, source});
    }));
  }
  for (auto& j : jobs) j.get();
  out << "mpis=" << cams.size() << '\n' << "planes=" << a.planes << '\n';
  return kExitOk;
}

// ---- render --------------------------------------------------------------

struct RenderArgs {
  std::string mpis;
  std::string path;
  std::string out;
  int samples = 1;
  std::string blend = "irregular";
};

int run_render(const RenderArgs& a, std::ostream& out) {
  const auto opt = view_options(a.blend);
  const auto mpis = load_mpis(a.mpis);
  const ViewPath path{read_pose_file(a.path), a.samples};
  const auto frames = path.frames();
  fs::create_directories(a.out);
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      write_png((fs::path{a.out} / numbered("frame_", i)).string(), render_novel_view(mpis, frames[i], opt).rgb);
    }));
  }
  for (auto& j : jobs) j.get();
  out << "frames=" << frames.size() << '\n';
  return kExitOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string mpis;
  std::string poses;
  std::string truth;
  std::string mode = "full";
  std::string blend = "irregular";
  std::string region = "full";
  std::string views_poses;
  std::string views;
  std::optional<double> z_min;
  std::optional<std::string> z_max;
  std::string csv;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
  const bool lfi = a.mode == "lfi";
  std::optional<AblationMode> ablation;
  if (!lfi) {
    try {
      ablation = parse_ablation_mode(a.mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (a.region != "full" && a.region != "covered") throw UsageError("eval: --region must be full or covered");
  const auto opt = view_options(a.blend);

  std::vector<Mpi> mpis;
  if (!a.mpis.empty()) mpis = load_mpis(a.mpis);
  if (!lfi && mpis.empty()) throw UsageError("eval: --mpis is required for mode " + a.mode);
  if (a.region == "covered" && mpis.empty()) throw UsageError("eval: --region covered needs --mpis");

  std::vector<PosedImage> sources;
  double disparity = 0.0;
  GammaInputs gamma;
  if (lfi) {
    if (a.views_poses.empty() || a.views.empty()) throw UsageError("eval: --mode lfi needs --views-poses and --views");
    sources = load_views(a.views_poses, a.views);
    double z_min = 0.0;
    double z_max = 0.0;
    if (a.z_min && a.z_max) {
      z_min = *a.z_min;
      z_max = parse_depth(*a.z_max);
    } else if (!mpis.empty()) {
      const auto meta = read_bundle_meta((bundle_dirs(a.mpis).front() / "meta.txt").string());
      z_min = meta.z_min;
      z_max = meta.z_max;
    } else {
      throw UsageError("eval: --mode lfi needs --z-min and --z-max (or --mpis with meta.txt)");
    }
    disparity = mean_disparity(z_min, z_max);
    gamma = GammaInputs{sources.front().camera.intrinsics.focal_px, 1, z_min};
  }

  const auto targets = read_pose_file(a.poses);
  MetricReport report;
  report.frames.resize(targets.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const auto truth_path = fs::path{a.truth} / numbered("frame_", i);
      const auto truth = rgb_of(read_png(truth_path.string()));
      if (!truth.same_shape(targets[i].width(), targets[i].height())) {
        throw std::runtime_error(truth_path.string() + " does not match its target camera");
      }
      const ImageRGB image = lfi ? lfi_render(sources, targets[i], disparity, opt, gamma)
                                 : ablation_render(mpis, targets[i], *ablation, opt);
      auto& m = report.frames[i];
      m.frame = static_cast<int>(i);
      if (a.region == "covered") {
        const auto cov = render_novel_view(mpis, targets[i], opt).coverage;
        ImageGray mask(cov.width(), cov.height());
        for (int y = 0; y < cov.height(); ++y) {
          for (int x = 0; x < cov.width(); ++x) mask.at(x, y) = cov.at(x, y) >= 0.999F ? 1.0F : 0.0F;
        }
        m.psnr = psnr(image, truth, mask);
        m.ssim = ssim(image, truth, mask);
      } else {
        m.psnr = psnr(image, truth);
        m.ssim = ssim(image, truth);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  std::ostringstream csv;
  write_metric_csv(csv, report);
  if (a.csv.empty()) {
    out << csv.str();
  } else {
    write_text_atomic(a.csv, csv.str());
  }
  out << "mode=" << a.mode << '\n'
      << "frames=" << report.frames.size() << '\n'
      << "mean_psnr=" << full_precision(report.mean_psnr()) << '\n'
      << "mean_ssim=" << full_precision(report.mean_ssim()) << '\n';
  return kExitOk;
}

// ---- slice ---------------------------------------------------------------

int run_slice(const std::string& frames_dir, int row, const std::string& out_path, std::ostream& out) {
  if (!fs::is_directory(frames_dir)) throw std::runtime_error("no such frame directory: " + frames_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(frames_dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no frame_*.png in " + frames_dir);
  std::vector<ImageRGB> frames;
  for (const auto& f : files) frames.push_back(rgb_of(read_png(f.string())));
  const auto slice = epipolar_slice(frames, row);
  write_png(out_path, slice);
  out << "frames=" << frames.size() << '\n' << "width=" << slice.width() << '\n';
  return kExitOk;
}

// ---- export-web ----------------------------------------------------------

int run_export_web(const std::string& mpis_dir, const std::string& out_dir, const std::string& blend,
                   std::ostream& out) {
  const auto mode = blend_flag(blend);
  const auto dirs = bundle_dirs(mpis_dir);
  const auto mpis = load_mpis(mpis_dir);
  const fs::path root{out_dir};
  fs::create_directories(root);

  double z_min = kInf;
  double z_max = 0.0;
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t k = 0; k < mpis.size(); ++k) {
    const auto& mpi = mpis[k];
    const fs::path sub = "mpi_" + std::to_string(k);
    fs::create_directories(root / sub);
    nlohmann::json planes = nlohmann::json::array();
    for (int d = 0; d < mpi.plane_count(); ++d) {
      std::ostringstream name;
      name << "plane_" << std::setw(3) << std::setfill('0') << d << ".png";
      write_png((root / sub / name.str()).string(), mpi.planes()[static_cast<std::size_t>(d)]);
      planes.push_back((sub / name.str()).generic_string());
    }
    const auto record = mpi.camera().to_record();
    BundleMeta meta{mpi.z_min(), mpi.z_max(), ""};
    if (fs::exists(dirs[k] / "meta.txt")) meta = read_bundle_meta((dirs[k] / "meta.txt").string());
    z_min = std::min(z_min, meta.z_min);
    z_max = std::max(z_max, meta.z_max);
    const auto g = gamma_inputs_of(mpi);
    entries.push_back({{"camera", std::vector<double>(record.begin(), record.end())},
                       {"disparities", mpi.disparities()},
                       {"planes", planes},
                       {"source", meta.source_image},
                       {"gamma_inputs", {{"focal_px", g.focal_px}, {"plane_count", g.plane_count}, {"z_min", g.z_min}}}});
  }

  nlohmann::json manifest;
  manifest["version"] = "llff-web-1: 8-bit straight-alpha RGBA planes far to near; premultiplied over, float framebuffers";
  manifest["blend_mode"] = blend == "grid" || blend == "irregular" ? blend : std::string{to_string(mode)};
  manifest["neighbors"] = mode == BlendMode::GridBilinear ? kGridNeighbors : kIrregularNeighbors;
  manifest["epsilon"] = kFuseEpsilon;
  manifest["z_min"] = z_min;
  // JSON has no infinity; null means unbounded.
  manifest["z_max"] = std::isinf(z_max) ? nlohmann::json(nullptr) : nlohmann::json(z_max);
  manifest["mpis"] = entries;
  write_text_atomic(root / "manifest.json", manifest.dump(2) + "\n");
  out << "mpis=" << mpis.size() << '\n';
  return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local light field fusion: capture planning, MPI building, rendering and evaluation"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Capture plan for a square view plane");
  p->add_option("--theta-deg", plan.theta_deg, "Horizontal field of view, degrees")->required();
  p->add_option("--s", plan.side, "Side of the square view plane, meters")->required();
  p->add_option("--zmin", plan.z_min, "Nearest scene depth, meters")->required();
  auto* pw = p->add_option("--width", plan.width, "Image width in pixels");
  auto* pv = p->add_option("--views", plan.views, "Desired number of views");
  pw->excludes(pv);
  p->add_option("--max-views", plan.max_views, "Fail if the plan needs more views");
  p->add_option("--max-disparity", plan.max_disparity, "Largest disparity one MPI may cover, pixels");
  p->add_option("--positions", plan.positions, "Write view positions as x,y CSV");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a layered test scene with grid captures and held-out targets");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--layers", synth.spec.layers, "Number of scene layers");
  s->add_option("--seed", synth.spec.seed, "Texture seed");
  s->add_option("--zmin", synth.spec.z_min, "Nearest layer depth, meters");
  s->add_option("--zfar", synth.spec.z_far, "Farthest layer depth, meters");
  s->add_option("--width", synth.width);
  s->add_option("--height", synth.height);
  s->add_option("--focal", synth.focal, "Focal length, pixels");
  s->add_option("--grid", synth.grid, "Cameras per side");
  s->add_option("--d-max", synth.d_max, "Disparity of the nearest layer between adjacent views, pixels");
  s->add_option("--targets", synth.targets, "Held-out target views");

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build one MPI per input view");
  b->add_option("--poses", build.poses, "Pose file of the input views")->required();
  b->add_option("--images", build.images, "Directory of view_XXXX.png");
  b->add_option("--ground-truth", build.scene, "Scene JSON; use the exact layered builder instead");
  b->add_option("--out", build.out, "Output directory")->required();
  b->add_option("--planes", build.planes, "Planes per MPI");
  b->add_option("--zmin", build.z_min, "Nearest plane depth, meters");
  b->add_option("--zmax", build.z_max, "Farthest plane depth, meters, or inf");
  b->add_option("--margin", build.margin, "Extra border in pixels around ground-truth MPIs");
  b->add_option("--temperature", build.temperature, "Photoconsistency softmax temperature");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Render frames along a keyframed path");
  r->add_option("--mpis", render.mpis, "Directory of mpi_XXXX bundles")->required();
  r->add_option("--path", render.path, "Pose file of keyframes")->required();
  r->add_option("--out", render.out, "Output directory for frame_XXXX.png")->required();
  r->add_option("--samples", render.samples, "Frames per keyframe segment");
  r->add_option("--blend", render.blend, "grid or irregular");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "PSNR/SSIM against ground-truth frames");
  e->add_option("--mpis", eval.mpis, "Directory of mpi_XXXX bundles");
  e->add_option("--poses", eval.poses, "Pose file of target views")->required();
  e->add_option("--truth", eval.truth, "Directory of frame_XXXX.png")->required();
  e->add_option("--mode", eval.mode, "full, single, average or lfi");
  e->add_option("--blend", eval.blend, "grid or irregular");
  e->add_option("--region", eval.region, "full or covered");
  e->add_option("--views-poses", eval.views_poses, "Input pose file (lfi)");
  e->add_option("--views", eval.views, "Input image directory (lfi)");
  e->add_option("--zmin", eval.z_min, "Scene depth range for lfi");
  e->add_option("--zmax", eval.z_max, "Scene depth range for lfi, or inf");
  e->add_option("--csv", eval.csv, "Write per-frame metrics here instead of stdout");

  std::string slice_frames;
  std::string slice_out;
  int slice_row = 0;
  auto* sl = app.add_subcommand("slice", "Epipolar slice of rendered frames");
  sl->add_option("--frames", slice_frames, "Directory of frame_XXXX.png")->required();
  sl->add_option("--row", slice_row, "Pixel row")->required();
  sl->add_option("--out", slice_out, "Output PNG")->required();

  std::string web_mpis;
  std::string web_out;
  std::string web_blend = "irregular";
  auto* w = app.add_subcommand("export-web", "Viewer bundle: manifest.json and 8-bit plane PNGs");
  w->add_option("--mpis", web_mpis, "Directory of mpi_XXXX bundles")->required();
  w->add_option("--out", web_out, "Output directory")->required();
  w->add_option("--blend", web_blend, "grid or irregular");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kExitUsage;
  }

  try {
    if (p->parsed()) return run_plan(plan, out);
    if (s->parsed()) return run_synth(synth, out);
    if (b->parsed()) return run_build(build, out);
    if (r->parsed()) return run_render(render, out);
    if (e->parsed()) return run_eval(eval, out);
    if (sl->parsed()) return run_slice(slice_frames, slice_row, slice_out, out);
    if (w->parsed()) return run_export_web(web_mpis, web_out, web_blend, out);
  } catch (const UsageError& ex) {
    err << "llff: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "llff: " << ex.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

} // namespace llff::cli
