#include "llff/eval.hpp"
#include "llff/mpi.hpp"
#include "llff/psv.hpp"
#include "llff/scene.hpp"
#include "llff/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace llff;

namespace {

constexpr int kW = 64;
constexpr int kH = 48;
constexpr double kF = 64.0;

Intrinsics intrinsics() { return Intrinsics::centered(kW, kH, kF); }

SceneLayer textured_layer(double depth, double half, std::uint64_t seed, double coverage = 1.0) {
  std::mt19937_64 rng{seed};
  SceneLayer layer;
  layer.depth = depth;
  layer.x0 = -half;
  layer.y0 = -half;
  layer.x1 = half;
  layer.y1 = half;
  // Roughly two texels per pixel at z = depth.
  const int texels = static_cast<int>(std::ceil(2.0 * half * kF / depth * 2.0));
  layer.texture = procedural_texture(texels, texels, rng, 8.0, 32.0, coverage, 0.28);
  return layer;
}

// Reference at the origin plus four neighbours on a plus pattern.
std::vector<PosedImage> plus_views(const LayeredScene& scene, double baseline) {
  const Vec3 offsets[] = {{0, 0, 0}, {baseline, 0, 0}, {-baseline, 0, 0}, {0, baseline, 0}, {0, -baseline, 0}};
  std::vector<PosedImage> views;
  for (const auto& o : offsets) {
    const Camera cam{intrinsics(), Pose::translated(o)};
    views.push_back({cam, render_layered_scene(scene, cam)});
  }
  return views;
}

// Front-to-back transmittance-weighted contribution of each slice.
std::vector<double> slice_weights(const Mpi& mpi, int x, int y) {
  std::vector<double> w(static_cast<std::size_t>(mpi.plane_count()));
  double transmit = 1.0;
  for (int d = mpi.plane_count() - 1; d >= 0; --d) {
    const double a = mpi.planes()[static_cast<std::size_t>(d)].at(x, y, 3);
    w[static_cast<std::size_t>(d)] = transmit * a;
    transmit *= 1.0 - a;
  }
  return w;
}

} // namespace

TEST_CASE("build_psv") {
  LayeredScene scene;
  scene.layers.push_back(textured_layer(2.0, 4.0, 3));
  const auto views = plus_views(scene, 0.1);
  const Camera& ref = views[0].camera;

  SUBCASE("reference view is reproduced on every plane") {
    const auto psv = build_psv(ref, views, 8, 1.0, 4.0);
    REQUIRE(psv.view_count() == 5);
    REQUIRE(psv.plane_count() == 8);
    for (int d = 0; d < 8; ++d) {
      CHECK(psv.colors[0][static_cast<std::size_t>(d)] == views[0].image);
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) REQUIRE(psv.valid[0][static_cast<std::size_t>(d)].at(x, y) == 1.0F);
      }
    }
  }
  SUBCASE("constant sources give constant volumes") {
    std::vector<PosedImage> flat = views;
    for (auto& v : flat) {
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
          v.image.at(x, y, 0) = 0.2F;
          v.image.at(x, y, 1) = 0.4F;
          v.image.at(x, y, 2) = 0.6F;
        }
      }
    }
    const auto psv = build_psv(ref, flat, 6, 1.0, 4.0);
    for (int v = 0; v < 5; ++v) {
      for (int d = 0; d < 6; ++d) {
        const auto& c = psv.colors[static_cast<std::size_t>(v)][static_cast<std::size_t>(d)];
        const auto& m = psv.valid[static_cast<std::size_t>(v)][static_cast<std::size_t>(d)];
        for (int y = 0; y < kH; ++y) {
          for (int x = 0; x < kW; ++x) {
            if (m.at(x, y) == 0.0F) continue;
            REQUIRE(c.at(x, y, 0) == doctest::Approx(0.2).epsilon(1e-5));
            REQUIRE(c.at(x, y, 2) == doctest::Approx(0.6).epsilon(1e-5));
          }
        }
      }
    }
  }
  SUBCASE("every view aligns on the plane at the layer's depth") {
    // D = 4 between z = 1 and z = 4 puts plane 1 exactly at disparity 1/2.
    const auto psv = build_psv(ref, views, 4, 1.0, 4.0);
    REQUIRE(psv.disparities[1] == doctest::Approx(0.5));
    for (int v = 1; v < 5; ++v) {
      const auto& c = psv.colors[static_cast<std::size_t>(v)][1];
      const auto& m = psv.valid[static_cast<std::size_t>(v)][1];
      double worst = 0.0;
      int valid = 0;
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
          if (m.at(x, y) == 0.0F) continue;
          ++valid;
          for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, double(std::abs(c.at(x, y, ch) - views[0].image.at(x, y, ch))));
        }
      }
      CHECK(valid > kW * kH / 2);
      CHECK(worst < 2e-2);
    }
  }
  SUBCASE("source count and reference checks") {
    std::vector<PosedImage> three(views.begin(), views.begin() + 3);
    CHECK_THROWS_AS(build_psv(ref, three, 4, 1.0, 4.0), std::invalid_argument);
    CHECK_NOTHROW(build_psv(ref, three, 4, 1.0, 4.0, true));
    std::vector<PosedImage> swapped = views;
    std::swap(swapped[0], swapped[1]);
    CHECK_THROWS_AS(build_psv(ref, swapped, 4, 1.0, 4.0), std::invalid_argument);
  }
}

TEST_CASE("nearest_views") {
  LayeredScene scene;
  scene.layers.push_back(textured_layer(2.0, 4.0, 1));
  std::vector<PosedImage> views;
  for (const auto& cam : grid_cameras(intrinsics(), 3, 3, 0.1)) views.push_back({cam, ImageRGB(kW, kH)});
  const auto idx = nearest_views(views, 4);
  REQUIRE(idx.size() == 5);
  CHECK(idx[0] == 4);
  CHECK(std::vector<std::size_t>(idx.begin() + 1, idx.end()) == std::vector<std::size_t>{1, 3, 5, 7});
}

TEST_CASE("build_mpi_photoconsistency") {
  SUBCASE("single textured plane concentrates mass on its bracketing slices") {
    LayeredScene scene;
    scene.layers.push_back(textured_layer(1.8, 4.0, 11));
    // About 0.9 px of parallax between adjacent slices.
    const auto views = plus_views(scene, 0.25);
    const auto psv = build_psv(views[0].camera, views, 16, 1.0, 8.0);
    const auto mpi = build_mpi_photoconsistency(psv);
    const double disparity = 1.0 / 1.8;
    std::size_t lo = 0;
    while (lo + 1 < mpi.disparities().size() && mpi.disparities()[lo + 1] <= disparity) ++lo;
    double inside = 0.0;
    double total = 0.0;
    // Interior pixels, where every source sees the layer.
    for (int y = 12; y < kH - 12; ++y) {
      for (int x = 12; x < kW - 12; ++x) {
        const auto w = slice_weights(mpi, x, y);
        for (std::size_t d = 0; d < w.size(); ++d) {
          total += w[d];
          if (d == lo || d == lo + 1) inside += w[d];
        }
      }
    }
    MESSAGE("bracketing mass fraction " << inside / total);
    CHECK(inside / total >= 0.9);
  }
  SUBCASE("textureless input puts all mass on the farthest slice") {
    std::vector<PosedImage> views;
    for (const auto& cam : grid_cameras(intrinsics(), 3, 1, 0.1)) {
      ImageRGB img(kW, kH);
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) img.at(x, y, 1) = 0.5F;
      }
      views.push_back({cam, img});
    }
    std::swap(views[0], views[1]);
    const auto psv = build_psv(views[0].camera, views, 8, 1.0, 4.0, true);
    const auto mpi = build_mpi_photoconsistency(psv);
    for (int y = 0; y < kH; y += 5) {
      for (int x = 0; x < kW; x += 5) {
        const auto w = slice_weights(mpi, x, y);
        REQUIRE(w[0] == doctest::Approx(1.0));
      }
    }
  }
  SUBCASE("reference-pose render reproduces a two-layer scene") {
    LayeredScene scene;
    scene.layers.push_back(textured_layer(1.5, 0.6, 21));
    scene.layers.push_back(textured_layer(4.0, 8.0, 22));
    const auto views = plus_views(scene, 0.12);
    const auto psv = build_psv(views[0].camera, views, 32, 1.0, 8.0);
    const auto mpi = build_mpi_photoconsistency(psv);
    const auto out = render_mpi(mpi, views[0].camera);
    const double p = psnr(out.rgb, views[0].image);
    MESSAGE("reference psnr " << p);
    CHECK(p >= 30.0);
  }
  SUBCASE("alphas stay in range") {
    LayeredScene scene;
    scene.layers.push_back(textured_layer(2.5, 4.0, 5));
    const auto views = plus_views(scene, 0.1);
    const auto mpi = build_mpi_photoconsistency(build_psv(views[0].camera, views, 8, 1.0, 8.0));
    for (const auto& plane : mpi.planes()) {
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
          REQUIRE(plane.at(x, y, 3) >= 0.0F);
          REQUIRE(plane.at(x, y, 3) <= 1.0F);
        }
      }
    }
  }
}

TEST_CASE("build_mpi_groundtruth") {
  SyntheticSceneSpec spec;
  spec.focal_px = kF;
  spec.z_far = 4.0;
  const auto scene = make_layered_scene(spec);
  const Camera ref{intrinsics(), Pose{}};

  SUBCASE("reference render equals the analytic render") {
    for (int planes : {4, 16, 32}) {
      const auto mpi = build_mpi_groundtruth(scene, ref, planes, 1.0, 1e9);
      const auto out = render_mpi(mpi, ref);
      const auto truth = render_layered_scene(scene, ref);
      double worst = 0.0;
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
          for (int c = 0; c < 3; ++c) worst = std::max(worst, double(std::abs(out.rgb.at(x, y, c) - truth.at(x, y, c))));
          REQUIRE(out.alpha.at(x, y) == doctest::Approx(1.0));
        }
      }
      CHECK(worst < 1e-5);
    }
  }
  SUBCASE("single plane still reproduces the reference") {
    const auto mpi = build_mpi_groundtruth(scene, ref, 1, 1.0, 1e9);
    CHECK(psnr(render_mpi(mpi, ref).rgb, render_layered_scene(scene, ref)) > 60.0);
  }
  SUBCASE("layer outside the depth range is rejected") {
    CHECK_THROWS_AS(build_mpi_groundtruth(scene, ref, 8, 1.5, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(build_mpi_groundtruth(scene, ref, 8, 1.0, 3.0), std::invalid_argument);
  }
  SUBCASE("empty scene is the background") {
    LayeredScene empty;
    empty.background = {0.1F, 0.2F, 0.3F};
    const auto mpi = build_mpi_groundtruth(empty, ref, 4, 1.0, 4.0);
    const auto out = render_mpi(mpi, Camera{intrinsics(), Pose::translated(Vec3{0.05, 0, 0})});
    CHECK(out.rgb.at(10, 10, 2) == doctest::Approx(0.3));
    CHECK(out.alpha.at(10, 10) == doctest::Approx(1.0));
  }
  SUBCASE("stored values are straight rgba in range") {
    const auto mpi = build_mpi_groundtruth(scene, ref, 8, 1.0, 1e9);
    for (const auto& plane : mpi.planes()) {
      for (float v : plane.data()) {
        REQUIRE(v >= 0.0F);
        REQUIRE(v <= 1.0F);
      }
    }
  }
  SUBCASE("visible_only drops occluded samples") {
    GroundTruthOptions opt;
    opt.visible_only = true;
    const auto full = build_mpi_groundtruth(scene, ref, 16, 1.0, 1e9);
    const auto vis = build_mpi_groundtruth(scene, ref, 16, 1.0, 1e9, opt);
    CHECK(psnr(render_mpi(vis, ref).rgb, render_mpi(full, ref).rgb) > 60.0);
    double full_mass = 0.0;
    double vis_mass = 0.0;
    for (int d = 0; d < 16; ++d) {
      const auto& a = full.planes()[static_cast<std::size_t>(d)];
      const auto& b = vis.planes()[static_cast<std::size_t>(d)];
      for (int y = 0; y < kH; ++y) {
        for (int x = 0; x < kW; ++x) {
          full_mass += a.at(x, y, 3);
          vis_mass += b.at(x, y, 3);
        }
      }
    }
    CHECK(vis_mass < full_mass);
  }
}

TEST_CASE("scene save/load round trip") {
  SyntheticSceneSpec spec;
  spec.layers = 2;
  const auto scene = make_layered_scene(spec);
  const auto dir = std::filesystem::temp_directory_path() / "llff_scene_rt";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  save_scene(scene, (dir / "scene.json").string());
  const auto loaded = load_scene((dir / "scene.json").string());
  REQUIRE(loaded.layers.size() == 2);
  const Camera cam{intrinsics(), Pose::translated(Vec3{0.03, -0.02, 0})};
  // Textures pass through 8-bit PNG.
  CHECK(psnr(render_layered_scene(loaded, cam), render_layered_scene(scene, cam)) > 40.0);
  std::filesystem::remove_all(dir);
}
