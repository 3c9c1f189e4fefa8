#include "oracles.hpp"

#include "llff/errors.hpp"
#include "llff/fusion.hpp"
#include "llff/scene.hpp"

#include <doctest.h>

#include <random>

using namespace llff;

namespace {

RenderOutput constant_render(int w, int h, float value, float alpha) {
  RenderOutput r{ImageRGB(w, h, value), ImageGray(w, h, alpha)};
  return r;
}

std::vector<Pose> grid_poses(int nx, int ny, double spacing) {
  std::vector<Pose> poses;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) poses.push_back(Pose::translated(Vec3{i * spacing, j * spacing, 0.0}));
  }
  return poses;
}

} // namespace

TEST_CASE("gamma and exponential weights") {
  const GammaInputs g{500.0, 32, 1.0};
  CHECK(g.gamma() == doctest::Approx(15.625));
  const std::vector<Pose> poses{Pose::translated(Vec3{0.1, 0, 0})};
  const auto w = blend_weights(Pose{}, poses, BlendMode::IrregularExponential, g);
  REQUIRE(w.entries.size() == 1);
  CHECK(w.entries[0].weight == doctest::Approx(std::exp(-1.5625)));
  CHECK(w.entries[0].weight == doctest::Approx(0.2096).epsilon(1e-3));
  CHECK(w.gamma == doctest::Approx(15.625));
}

TEST_CASE("irregular weights: coincident pose dominates, K = min(5, n), ties by index") {
  std::mt19937_64 rng{4};
  std::uniform_real_distribution<double> u{-1.0, 1.0};
  std::vector<Pose> poses;
  for (int i = 0; i < 9; ++i) poses.push_back(Pose::translated(Vec3{u(rng), u(rng), u(rng)}));
  const auto w = blend_weights(poses[3], poses, BlendMode::IrregularExponential, GammaInputs{100, 8, 1.0});
  REQUIRE(w.entries.size() == 5);
  CHECK(w.entries[0].mpi_index == 3);
  CHECK(w.entries[0].weight == 1.0);
  for (std::size_t i = 1; i < w.entries.size(); ++i) CHECK(w.entries[i].weight < 1.0);

  const auto three = blend_weights(Pose{}, std::span{poses}.first(3), BlendMode::IrregularExponential,
                                   GammaInputs{100, 8, 1.0});
  CHECK(three.entries.size() == 3);

  const std::vector<Pose> tied{Pose::translated(Vec3{1, 0, 0}), Pose::translated(Vec3{-1, 0, 0})};
  const auto t = blend_weights(Pose{}, tied, BlendMode::IrregularExponential, GammaInputs{100, 8, 1.0});
  CHECK(t.entries[0].mpi_index == 0);

  CHECK_THROWS_AS(blend_weights(Pose{}, poses, BlendMode::IrregularExponential), std::invalid_argument);
  Pose bad;
  bad.translation.x() = std::nan("");
  CHECK_THROWS_AS(blend_weights(bad, poses, BlendMode::IrregularExponential, GammaInputs{}), std::invalid_argument);
}

TEST_CASE("nearest dominance holds for random layouts") {
  std::mt19937_64 rng{12};
  std::uniform_real_distribution<double> u{-1.0, 1.0};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Pose> poses;
    for (int i = 0; i < 8; ++i) poses.push_back(Pose::translated(Vec3{u(rng), u(rng), 0}));
    const Pose target = Pose::translated(Vec3{u(rng), u(rng), 0});
    const auto w = blend_weights(target, poses, BlendMode::IrregularExponential, GammaInputs{80, 16, 0.5});
    for (const auto& e : w.entries) REQUIRE(w.entries.front().weight >= e.weight);
  }
}

TEST_CASE("grid bilinear weights") {
  const auto poses = grid_poses(3, 3, 0.2);
  SUBCASE("cell centre") {
    const auto w = blend_weights(Pose::translated(Vec3{0.1, 0.1, 0}), poses, BlendMode::GridBilinear);
    REQUIRE(w.entries.size() == 4);
    for (const auto& e : w.entries) CHECK(e.weight == doctest::Approx(0.25));
  }
  SUBCASE("weights sum to one and pick the enclosing cell") {
    std::mt19937_64 rng{6};
    std::uniform_real_distribution<double> u{0.0, 0.4};
    for (int i = 0; i < 100; ++i) {
      const Vec3 t{u(rng), u(rng), 0.0};
      const auto w = blend_weights(Pose::translated(t), poses, BlendMode::GridBilinear);
      double sum = 0.0;
      Vec3 centroid = Vec3::Zero();
      for (const auto& e : w.entries) {
        sum += e.weight;
        centroid += e.weight * poses[e.mpi_index].translation;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((centroid - t).norm() < 1e-12);
    }
  }
  SUBCASE("on a lattice node") {
    const auto w = blend_weights(poses[4], poses, BlendMode::GridBilinear);
    double max_w = 0.0;
    std::size_t idx = 0;
    for (const auto& e : w.entries) {
      if (e.weight > max_w) {
        max_w = e.weight;
        idx = e.mpi_index;
      }
    }
    CHECK(idx == 4);
    CHECK(max_w == doctest::Approx(1.0));
  }
  SUBCASE("non-lattice poses are rejected") {
    auto broken = poses;
    broken[2].translation.x() += 0.01;
    CHECK_THROWS_AS(blend_weights(Pose{}, broken, BlendMode::GridBilinear), ModeError);
    auto missing = poses;
    missing.pop_back();
    CHECK_THROWS_AS(blend_weights(Pose{}, missing, BlendMode::GridBilinear), ModeError);
    const auto line = grid_poses(4, 1, 0.2);
    CHECK_THROWS_AS(blend_weights(Pose{}, line, BlendMode::GridBilinear), ModeError);
  }
}

TEST_CASE("fuse examples") {
  SUBCASE("identical opaque renders") {
    const auto r = constant_render(3, 3, 0.3F, 1.0F);
    const auto out = fuse(std::vector{r, r, r}, std::vector{0.2, 0.5, 3.0});
    CHECK(out.rgb.at(1, 1, 0) == doctest::Approx(0.3));
  }
  SUBCASE("occluded term is dropped") {
    const auto a = constant_render(2, 2, 0.9F, 0.0F);
    const auto b = constant_render(2, 2, 0.2F, 1.0F);
    for (double wa : {0.01, 1.0, 100.0}) {
      const auto out = fuse(std::vector{a, b}, std::vector{wa, 0.5});
      CHECK(out.rgb.at(0, 0, 0) == doctest::Approx(0.2).epsilon(1e-7));
    }
  }
  SUBCASE("weighted mean") {
    const auto out = fuse(std::vector{constant_render(2, 2, 0.0F, 1.0F), constant_render(2, 2, 1.0F, 1.0F)},
                          std::vector{0.25, 0.75});
    CHECK(out.rgb.at(0, 0, 2) == doctest::Approx(0.75));
    CHECK(out.coverage.at(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("fallback where every alpha vanishes") {
    const auto out = fuse(std::vector{constant_render(2, 2, 0.0F, 0.0F), constant_render(2, 2, 0.4F, 0.0F)},
                          std::vector{1.0, 3.0});
    CHECK(out.rgb.at(0, 0, 0) == doctest::Approx(0.3));
    CHECK(out.coverage.at(0, 0) == 0.0F);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fuse(std::vector<RenderOutput>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(fuse(std::vector{constant_render(2, 2, 0, 1)}, std::vector{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fuse(std::vector{constant_render(2, 2, 0, 1), constant_render(3, 2, 0, 1)},
                         std::vector{1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fuse(std::vector{constant_render(2, 2, 0, 1)}, std::vector{0.0}), std::invalid_argument);
  }
}

TEST_CASE("fuse is scale invariant and convex") {
  std::mt19937_64 rng{31};
  std::uniform_real_distribution<float> u{0.0F, 1.0F};
  std::uniform_real_distribution<double> wd{0.01, 2.0};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RenderOutput> renders;
    std::vector<double> weights;
    for (int k = 0; k < 4; ++k) {
      RenderOutput r{ImageRGB(5, 4), ImageGray(5, 4)};
      for (float& v : r.alpha.data()) v = u(rng) < 0.2F ? 0.0F : u(rng);
      for (float& v : r.rgb.data()) v = u(rng);
      renders.push_back(std::move(r));
      weights.push_back(wd(rng));
    }
    const auto base = fuse(renders, weights);
    std::vector<double> scaled = weights;
    for (double& w : scaled) w *= 37.5;
    const auto out = fuse(renders, scaled);
    for (std::size_t i = 0; i < base.rgb.data().size(); ++i) {
      REQUIRE(std::abs(base.rgb.data()[i] - out.rgb.data()[i]) <= 1e-6);
    }
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 5; ++x) {
        if (!(base.coverage.at(x, y) >= kFuseEpsilon)) continue;
        for (int c = 0; c < 3; ++c) {
          float lo = 1.0F;
          float hi = 0.0F;
          for (std::size_t k = 0; k < renders.size(); ++k) {
            if (renders[k].alpha.at(x, y) == 0.0F) continue;
            lo = std::min(lo, renders[k].rgb.at(x, y, c));
            hi = std::max(hi, renders[k].rgb.at(x, y, c));
          }
          REQUIRE(base.rgb.at(x, y, c) >= lo - 1e-6F);
          REQUIRE(base.rgb.at(x, y, c) <= hi + 1e-6F);
        }
      }
    }
  }
}

TEST_CASE("render_novel_view") {
  std::mt19937_64 rng{15};
  const Camera ref{Intrinsics::centered(24, 18, 40.0), Pose{}};
  SUBCASE("one MPI reproduces render_mpi") {
    const auto mpi = oracle::random_mpi(rng, ref, 4, 1.0, 20.0);
    Camera target = ref;
    target.pose.translation = Vec3{0.03, 0.01, 0.0};
    const auto single = render_mpi(mpi, target);
    const auto fused = render_novel_view(std::vector{mpi}, target);
    for (int y = 0; y < 18; ++y) {
      for (int x = 0; x < 24; ++x) {
        CHECK(fused.coverage.at(x, y) == doctest::Approx(single.alpha.at(x, y)));
        if (single.alpha.at(x, y) >= 1e-6F) {
          const float a = single.alpha.at(x, y);
          for (int c = 0; c < 3; ++c) CHECK(fused.rgb.at(x, y, c) == doctest::Approx(single.rgb.at(x, y, c)).epsilon(1e-5));
          (void)a;
        }
      }
    }
  }
  SUBCASE("target at an MPI reference pose is dominated by that MPI where it is opaque") {
    std::vector<Mpi> mpis;
    for (int k = 0; k < 4; ++k) {
      Camera cam = ref;
      cam.pose.translation = Vec3{0.02 * k, 0.0, 0.0};
      std::vector<ImageRGBA> planes;
      for (int d = 0; d < 3; ++d) {
        auto p = oracle::random_rgba(rng, 24, 18);
        if (d == 0) {
          for (int y = 0; y < 18; ++y)
            for (int x = 0; x < 24; ++x) p.at(x, y, 3) = 1.0F;
        }
        planes.push_back(std::move(p));
      }
      mpis.emplace_back(cam, disparity_planes(3, 1.0, 10.0), std::move(planes));
    }
    NovelViewOptions opts;
    opts.mode = BlendMode::IrregularExponential;
    const auto out = render_novel_view(mpis, mpis[1].camera(), opts);
    const auto self = render_mpi(mpis[1], mpis[1].camera());
    // Neighbours differ from the self-render only through their reprojection, and the
    // self weight exp(0) = 1 dominates; bound the deviation by the neighbours' share.
    const auto w = blend_weights(mpis[1].camera().pose,
                                 std::vector{mpis[0].camera().pose, mpis[1].camera().pose, mpis[2].camera().pose,
                                             mpis[3].camera().pose},
                                 BlendMode::IrregularExponential, gamma_inputs_of(mpis[0]));
    double total = 0.0;
    for (const auto& e : w.entries) total += e.weight;
    const double share = (total - 1.0) / total;
    for (int y = 0; y < 18; ++y) {
      for (int x = 0; x < 24; ++x) {
        for (int c = 0; c < 3; ++c) REQUIRE(std::abs(out.rgb.at(x, y, c) - self.rgb.at(x, y, c)) <= share + 1e-6);
      }
    }
  }
}
