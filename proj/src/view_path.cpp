#include "llff/view_path.hpp"

#include <Eigen/Geometry>

#include <stdexcept>

namespace llff {

ViewPath::ViewPath(std::vector<Camera> keyframes, int samples_per_segment)
    : keyframes_{std::move(keyframes)}, samples_{samples_per_segment} {
  if (keyframes_.empty()) throw std::invalid_argument("view path needs at least one keyframe");
  if (samples_ < 1) throw std::invalid_argument("samples per segment must be >= 1");
  for (const auto& k : keyframes_) k.validate();
}

int ViewPath::frame_count() const noexcept {
  return static_cast<int>(keyframes_.size() - 1) * samples_ + 1;
}

Camera ViewPath::frame(int index) const {
  if (index < 0 || index >= frame_count()) throw std::out_of_range("view path frame index out of range");
  const auto segment = static_cast<std::size_t>(index / samples_);
  if (segment + 1 >= keyframes_.size()) return keyframes_.back();
  const double t = static_cast<double>(index % samples_) / samples_;
  const Camera& a = keyframes_[segment];
  const Camera& b = keyframes_[segment + 1];

  Camera out = a;
  out.pose.translation = (1.0 - t) * a.pose.translation + t * b.pose.translation;
  const Eigen::Quaterniond qa{a.pose.rotation};
  const Eigen::Quaterniond qb{b.pose.rotation};
  out.pose.rotation = qa.slerp(t, qb).normalized().toRotationMatrix();
  return out;
}

std::vector<Camera> ViewPath::frames() const {
  std::vector<Camera> out;
  out.reserve(static_cast<std::size_t>(frame_count()));
  for (int i = 0; i < frame_count(); ++i) out.push_back(frame(i));
  return out;
}

} // namespace llff
