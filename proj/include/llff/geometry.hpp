#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace llff {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Pinhole intrinsics in pixel units. Pixel centres sit at integer coordinates.
struct Intrinsics {
  double focal_px = 1.0;
  int width_px = 1;
  int height_px = 1;
  double principal_x = 0.0;
  double principal_y = 0.0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  [[nodiscard]] Mat3 matrix() const;
  [[nodiscard]] Mat3 inverse_matrix() const;
  /// Principal point at the raster centre.
  static Intrinsics centered(int width, int height, double focal_px);

  bool operator==(const Intrinsics&) const = default;
};

/// Camera-to-world rigid transform: columns of `rotation` are the camera axes
/// in world coordinates, `translation` is the camera centre.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  void validate() const;
  [[nodiscard]] Vec3 to_camera(const Vec3& world) const;
  [[nodiscard]] Vec3 to_world(const Vec3& camera) const;
  static Pose translated(const Vec3& center);

  bool operator==(const Pose& other) const {
    return rotation == other.rotation && translation == other.translation;
  }
};

struct Camera {
  Intrinsics intrinsics;
  Pose pose;

  void validate() const;
  [[nodiscard]] int width() const noexcept { return intrinsics.width_px; }
  [[nodiscard]] int height() const noexcept { return intrinsics.height_px; }
  [[nodiscard]] const Vec3& center() const noexcept { return pose.translation; }

  /// Serialises in pose-file field order (17 values).
  [[nodiscard]] std::array<double, 17> to_record() const;
  static Camera from_record(const std::array<double, 17>& record);

  bool operator==(const Camera&) const = default;
};

struct Projection {
  Vec2 pixel;
  double depth;
};

/// Pinhole projection; throws BehindCameraError when z_cam <= 0.
Projection project(const Camera& cam, const Vec3& world_point);

/// Inverse of project for a point at the given optical-axis depth.
Vec3 unproject(const Camera& cam, const Vec2& pixel, double depth);

/// Maps homogeneous reference pixels onto target pixels for the fronto-parallel
/// plane at depth 1/disparity in the reference frame (disparity 0 = infinity).
Mat3 plane_homography(const Camera& ref, const Camera& target, double disparity);

/// Pixel shift of a fronto-parallel point at `depth` between the two cameras:
/// |c_a - c_b| * focal_px / depth. Warns on stderr if orientations differ.
double pixel_disparity(const Camera& cam_a, const Camera& cam_b, double depth);

/// Scales so the bottom-right entry is 1 (or the largest entry is 1 if that is 0).
Mat3 normalized_homography(const Mat3& h);

/// Applies a homography to a pixel position.
Vec2 apply_homography(const Mat3& h, const Vec2& pixel);

/// Reads the whitespace-separated 17-field pose file format ('#' starts a comment).
std::vector<Camera> read_pose_file(const std::string& path);
std::vector<Camera> parse_pose_text(std::istream& in);
void write_pose_file(const std::string& path, const std::vector<Camera>& cameras);
void write_pose_text(std::ostream& out, const std::vector<Camera>& cameras);

} // namespace llff
