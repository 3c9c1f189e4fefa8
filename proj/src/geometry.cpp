#include "llff/geometry.hpp"

#include "llff/errors.hpp"
#include "llff/log.hpp"

#include <Eigen/LU>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace llff {
namespace {

bool finite(const Mat3& m) { return m.allFinite(); }
bool finite(const Vec3& v) { return v.allFinite(); }

} // namespace

void Intrinsics::validate() const {
  if (!(focal_px > 0.0) || !std::isfinite(focal_px)) {
    throw std::invalid_argument("focal_px must be positive and finite");
  }
  if (width_px < 1 || height_px < 1) {
    throw std::invalid_argument("image dimensions must be >= 1");
  }
  if (!std::isfinite(principal_x) || !std::isfinite(principal_y)) {
    throw std::invalid_argument("principal point must be finite");
  }
}

Mat3 Intrinsics::matrix() const {
  Mat3 k;
  k << focal_px, 0.0, principal_x, 0.0, focal_px, principal_y, 0.0, 0.0, 1.0;
  return k;
}

Mat3 Intrinsics::inverse_matrix() const {
  const double inv_f = 1.0 / focal_px;
  Mat3 k;
  k << inv_f, 0.0, -principal_x * inv_f, 0.0, inv_f, -principal_y * inv_f, 0.0, 0.0, 1.0;
  return k;
}

Intrinsics Intrinsics::centered(int width, int height, double focal_px) {
  return Intrinsics{focal_px, width, height, 0.5 * (width - 1), 0.5 * (height - 1)};
}

void Pose::validate() const {
  if (!finite(rotation) || !finite(translation)) {
    throw std::invalid_argument("pose contains non-finite values");
  }
  const double ortho_err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-9) {
    throw std::invalid_argument("pose rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument("pose rotation must have determinant +1");
  }
}

Vec3 Pose::to_camera(const Vec3& world) const { return rotation.transpose() * (world - translation); }

Vec3 Pose::to_world(const Vec3& camera) const { return rotation * camera + translation; }

Pose Pose::translated(const Vec3& center) { return Pose{Mat3::Identity(), center}; }

void Camera::validate() const {
  intrinsics.validate();
  pose.validate();
}

std::array<double, 17> Camera::to_record() const {
  std::array<double, 17> r{};
  r[0] = intrinsics.width_px;
  r[1] = intrinsics.height_px;
  r[2] = intrinsics.focal_px;
  r[3] = intrinsics.principal_x;
  r[4] = intrinsics.principal_y;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r[5 + 3 * i + j] = pose.rotation(i, j);
  }
  for (int i = 0; i < 3; ++i) r[14 + i] = pose.translation(i);
  return r;
}

Camera Camera::from_record(const std::array<double, 17>& r) {
  for (double v : r) {
    if (!std::isfinite(v)) throw std::invalid_argument("camera record contains non-finite values");
  }
  if (r[0] != std::floor(r[0]) || r[1] != std::floor(r[1])) {
    throw std::invalid_argument("camera width/height must be integers");
  }
  Camera cam;
  cam.intrinsics = Intrinsics{r[2], static_cast<int>(r[0]), static_cast<int>(r[1]), r[3], r[4]};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) cam.pose.rotation(i, j) = r[5 + 3 * i + j];
  }
  for (int i = 0; i < 3; ++i) cam.pose.translation(i) = r[14 + i];
  cam.validate();
  return cam;
}

Projection project(const Camera& cam, const Vec3& world_point) {
  const Vec3 p = cam.pose.to_camera(world_point);
  if (!(p.z() > 0.0)) {
    throw BehindCameraError("point is behind the camera (z_cam = " + std::to_string(p.z()) + ")");
  }
  const auto& k = cam.intrinsics;
  return {Vec2{k.principal_x + k.focal_px * p.x() / p.z(), k.principal_y + k.focal_px * p.y() / p.z()},
          p.z()};
}

Vec3 unproject(const Camera& cam, const Vec2& pixel, double depth) {
  const auto& k = cam.intrinsics;
  const Vec3 p{(pixel.x() - k.principal_x) / k.focal_px * depth,
               (pixel.y() - k.principal_y) / k.focal_px * depth, depth};
  return cam.pose.to_world(p);
}

Mat3 plane_homography(const Camera& ref, const Camera& target, double disparity) {
  if (!std::isfinite(disparity) || !finite(ref.pose.rotation) || !finite(ref.pose.translation) ||
      !finite(target.pose.rotation) || !finite(target.pose.translation) ||
      !std::isfinite(ref.intrinsics.focal_px) || !std::isfinite(target.intrinsics.focal_px)) {
    throw std::invalid_argument("plane_homography: non-finite input");
  }
  if (disparity < 0.0) {
    throw std::invalid_argument("plane_homography: disparity must be >= 0");
  }
  if (ref == target) return Mat3::Identity();

  // X_t = (R + t n^T d) X_r for points X_r on the plane n^T X_r = 1/d, n = e_z.
  const Mat3 rel_rotation = target.pose.rotation.transpose() * ref.pose.rotation;
  const Vec3 rel_translation =
      target.pose.rotation.transpose() * (ref.pose.translation - target.pose.translation);
  Mat3 m = rel_rotation;
  m.col(2) += disparity * rel_translation;
  return target.intrinsics.matrix() * m * ref.intrinsics.inverse_matrix();
}

double pixel_disparity(const Camera& cam_a, const Camera& cam_b, double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw std::invalid_argument("pixel_disparity: depth must be positive and finite");
  }
  if ((cam_a.pose.rotation - cam_b.pose.rotation).cwiseAbs().maxCoeff() > 1e-9) {
    warn("pixel_disparity: cameras differ in orientation; disparity assumes a translational baseline");
  }
  const double baseline = (cam_a.pose.translation - cam_b.pose.translation).norm();
  return baseline * cam_a.intrinsics.focal_px / depth;
}

Mat3 normalized_homography(const Mat3& h) {
  const double s = std::abs(h(2, 2)) > 1e-300 ? h(2, 2) : h.cwiseAbs().maxCoeff();
  return h / s;
}

Vec2 apply_homography(const Mat3& h, const Vec2& pixel) {
  const Vec3 q = h * Vec3{pixel.x(), pixel.y(), 1.0};
  return {q.x() / q.z(), q.y() / q.z()};
}

std::vector<Camera> parse_pose_text(std::istream& in) {
  std::vector<Camera> cams;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields{line};
    std::array<double, 17> record{};
    std::size_t n = 0;
    std::string token;
    while (fields >> token) {
      if (n == record.size()) throw FormatError("pose line has more than 17 fields", line_no, "line");
      std::size_t used = 0;
      try {
        record[n] = std::stod(token, &used);
      } catch (const std::exception&) {
        throw FormatError("pose field '" + token + "' is not a number", line_no, "line");
      }
      if (used != token.size()) throw FormatError("pose field '" + token + "' is not a number", line_no, "line");
      ++n;
    }
    if (n == 0) continue;
    if (n != record.size()) {
      throw FormatError("pose line has " + std::to_string(n) + " fields, expected 17", line_no, "line");
    }
    try {
      cams.push_back(Camera::from_record(record));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string{"invalid camera: "} + e.what(), line_no, "line");
    }
  }
  return cams;
}

std::vector<Camera> read_pose_file(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error("cannot open pose file: " + path);
  return parse_pose_text(in);
}

void write_pose_text(std::ostream& out, const std::vector<Camera>& cameras) {
  out << "# W H focal_px cx cy r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& cam : cameras) {
    const auto r = cam.to_record();
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
    out << '\n';
  }
}

void write_pose_file(const std::string& path, const std::vector<Camera>& cameras) {
  std::ofstream out{path};
  if (!out) throw std::runtime_error("cannot write pose file: " + path);
  write_pose_text(out, cameras);
}

} // namespace llff
