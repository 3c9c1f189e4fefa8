#include "oracles.hpp"

#include "llff/errors.hpp"
#include "llff/geometry.hpp"
#include "llff/log.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

using namespace llff;

namespace {

Camera simple_camera(double focal = 100.0, Vec3 centre = Vec3::Zero()) {
  return Camera{Intrinsics{focal, 101, 81, 50.0, 40.0}, Pose::translated(centre)};
}

} // namespace

TEST_CASE("project: optical axis lands on the principal point") {
  const auto cam = simple_camera();
  const auto p = project(cam, Vec3{0, 0, 3});
  CHECK(p.pixel.x() == doctest::Approx(50.0));
  CHECK(p.pixel.y() == doctest::Approx(40.0));
  CHECK(p.depth == doctest::Approx(3.0));
}

TEST_CASE("project: off-axis point") {
  const Camera cam{Intrinsics{100.0, 100, 100, 50.0, 50.0}, Pose{}};
  const auto p = project(cam, Vec3{1, 0, 2});
  CHECK(p.pixel.x() == doctest::Approx(100.0));
  CHECK(p.pixel.y() == doctest::Approx(50.0));
  CHECK(p.depth == doctest::Approx(2.0));
}

TEST_CASE("project: behind the camera throws") {
  CHECK_THROWS_AS(project(simple_camera(), Vec3{0, 0, -1}), BehindCameraError);
  CHECK_THROWS_AS(project(simple_camera(), Vec3{0, 0, 0}), BehindCameraError);
}

TEST_CASE("unproject/project round trip") {
  std::mt19937_64 rng{11};
  std::uniform_real_distribution<double> px{0.0, 100.0};
  std::uniform_real_distribution<double> depth{0.05, 500.0};
  for (int i = 0; i < 500; ++i) {
    const auto cam = oracle::random_camera(rng, 100, 80, 0.5, 1.0);
    const Vec2 pixel{px(rng), px(rng)};
    const double z = depth(rng);
    const auto p = project(cam, unproject(cam, pixel, z));
    REQUIRE((p.pixel - pixel).norm() < 1e-9);
    REQUIRE(p.depth == doctest::Approx(z).epsilon(1e-12));
  }
}

TEST_CASE("plane_homography: identical cameras give identity") {
  std::mt19937_64 rng{3};
  for (double d : {0.0, 0.1, 0.5, 3.0}) {
    const auto cam = oracle::random_camera(rng, 64, 48, 0.3, 0.5);
    CHECK(normalized_homography(plane_homography(cam, cam, d)).isApprox(Mat3::Identity(), 1e-12));
  }
  // A copy with equal fields but built independently also normalises to identity.
  const auto cam = simple_camera(120.0, Vec3{0.3, -0.2, 0.1});
  auto copy = cam;
  copy.pose.rotation = Eigen::AngleAxisd(0.0, Vec3::UnitY()).toRotationMatrix();
  CHECK(normalized_homography(plane_homography(cam, copy, 0.7)).isApprox(Mat3::Identity(), 1e-12));
}

TEST_CASE("plane_homography: lateral translation shifts by f*t*d") {
  const auto ref = simple_camera(100.0);
  const auto target = simple_camera(100.0, Vec3{0.1, 0, 0});
  const Mat3 h = plane_homography(ref, target, 0.5);
  for (const Vec2 corner : {Vec2{0, 0}, Vec2{100, 0}, Vec2{0, 80}, Vec2{100, 80}}) {
    const Vec2 expected = oracle::transfer_pixel(ref, target, 0.5, corner);
    const Vec2 got = apply_homography(h, corner);
    CHECK((got - expected).norm() < 1e-9);
    CHECK(got.x() == doctest::Approx(corner.x() - 5.0));
    CHECK(got.y() == doctest::Approx(corner.y()));
  }
}

TEST_CASE("plane_homography: plane at infinity has no parallax") {
  std::mt19937_64 rng{5};
  std::uniform_real_distribution<double> t{-2.0, 2.0};
  for (int i = 0; i < 20; ++i) {
    const auto ref = simple_camera();
    const auto target = simple_camera(100.0, Vec3{t(rng), t(rng), t(rng)});
    CHECK(normalized_homography(plane_homography(ref, target, 0.0)).isApprox(Mat3::Identity(), 1e-12));
  }
}

TEST_CASE("plane_homography agrees with the unproject/project oracle on 1000 random pairs") {
  std::mt19937_64 rng{2024};
  std::uniform_real_distribution<double> disparity{0.0, 1.0};
  double worst = 0.0;
  int checked = 0;
  for (int pair = 0; pair < 1000; ++pair) {
    const auto ref = oracle::random_camera(rng, 64, 48, 0.2, 0.3);
    const auto target = oracle::random_camera(rng, 64, 48, 0.2, 0.3);
    const double d = disparity(rng);
    const Mat3 h = plane_homography(ref, target, d);
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 5; ++i) {
        const Vec2 px{i * 63.0 / 4.0, j * 47.0 / 4.0};
        // Skip rays whose plane point falls behind the target camera.
        const Vec3 world = d == 0.0 ? Vec3::Zero() : unproject(ref, px, 1.0 / d);
        if (d != 0.0 && target.pose.to_camera(world).z() <= 0.05) continue;
        const Vec2 expected = oracle::transfer_pixel(ref, target, d, px);
        if (!expected.allFinite() || expected.cwiseAbs().maxCoeff() > 1e5) continue;
        worst = std::max(worst, (apply_homography(h, px) - expected).norm());
        ++checked;
      }
    }
  }
  CHECK(checked > 20000);
  CHECK(worst < 1e-6);
}

TEST_CASE("plane_homography rejects bad input") {
  const auto cam = simple_camera();
  CHECK_THROWS_AS(plane_homography(cam, cam, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(plane_homography(cam, cam, std::nan("")), std::invalid_argument);
  auto bad = cam;
  bad.pose.translation.x() = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(plane_homography(cam, bad, 0.5), std::invalid_argument);
}

TEST_CASE("pixel_disparity") {
  SUBCASE("nyquist-rate phone configuration is about one pixel") {
    const double focal = 1000.0 / (2.0 * std::tan(32.0 * M_PI / 180.0));
    const auto a = simple_camera(focal);
    const auto b = simple_camera(focal, Vec3{6.25e-4, 0, 0});
    CHECK(pixel_disparity(a, b, 0.5) == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("zero baseline") { CHECK(pixel_disparity(simple_camera(), simple_camera(), 2.0) == 0.0); }
  SUBCASE("arithmetic") {
    CHECK(pixel_disparity(simple_camera(500.0), simple_camera(500.0, Vec3{0.02, 0, 0}), 1.0) ==
          doctest::Approx(10.0));
  }
  SUBCASE("linear in baseline and inverse depth") {
    const auto a = simple_camera(300.0);
    const double base = pixel_disparity(a, simple_camera(300.0, Vec3{0.01, 0.02, 0}), 1.5);
    CHECK(pixel_disparity(a, simple_camera(300.0, Vec3{0.03, 0.06, 0}), 1.5) == doctest::Approx(3.0 * base));
    CHECK(pixel_disparity(a, simple_camera(300.0, Vec3{0.01, 0.02, 0}), 0.75) == doctest::Approx(2.0 * base));
  }
  SUBCASE("invalid depth") {
    CHECK_THROWS_AS(pixel_disparity(simple_camera(), simple_camera(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pixel_disparity(simple_camera(), simple_camera(), -1.0), std::invalid_argument);
  }
  SUBCASE("rotated cameras warn") {
    std::string captured;
    auto previous = set_warning_handler([&](std::string_view m) { captured = m; });
    auto b = simple_camera();
    b.pose.rotation = Eigen::AngleAxisd(0.1, Vec3::UnitY()).toRotationMatrix();
    (void)pixel_disparity(simple_camera(), b, 1.0);
    set_warning_handler(std::move(previous));
    CHECK(captured.find("orientation") != std::string::npos);
  }
}

TEST_CASE("pose validation") {
  Pose p;
  p.rotation(0, 0) = 1.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  Pose reflect;
  reflect.rotation(2, 2) = -1.0;
  CHECK_THROWS_AS(reflect.validate(), std::invalid_argument);
  CHECK_THROWS_AS((Intrinsics{0.0, 10, 10, 5, 5}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Intrinsics{10.0, 0, 10, 5, 5}.validate()), std::invalid_argument);
}

TEST_CASE("pose file parsing") {
  std::mt19937_64 rng{9};
  std::vector<Camera> cams;
  for (int i = 0; i < 4; ++i) cams.push_back(oracle::random_camera(rng, 32, 24, 0.4, 1.0));
  std::stringstream text;
  write_pose_text(text, cams);
  std::stringstream with_comments;
  with_comments << "# header\n\n" << text.str() << "   # trailing comment\n";
  const auto parsed = parse_pose_text(with_comments);
  REQUIRE(parsed.size() == cams.size());
  for (std::size_t i = 0; i < cams.size(); ++i) CHECK(parsed[i] == cams[i]);

  std::stringstream short_line{"64 48 100 32 24 1 0 0 0 1 0 0 0 1 0 0\n"};
  CHECK_THROWS_AS(parse_pose_text(short_line), FormatError);
  std::stringstream bad_token{"64 48 100 32 24 1 0 0 0 1 0 0 0 1 0 0 zz\n"};
  CHECK_THROWS_AS(parse_pose_text(bad_token), FormatError);
  std::stringstream bad_rotation{"64 48 100 32 24 2 0 0 0 1 0 0 0 1 0 0 0\n"};
  CHECK_THROWS_AS(parse_pose_text(bad_rotation), FormatError);
}
