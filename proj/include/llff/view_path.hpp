#pragma once

#include "llff/geometry.hpp"

#include <vector>

namespace llff {

/// Keyframed camera path: linear translation and quaternion slerp between keyframes.
/// Intrinsics are taken from each segment's starting keyframe.
class ViewPath {
public:
  ViewPath(std::vector<Camera> keyframes, int samples_per_segment);

  /// (keyframes - 1) * samples_per_segment + 1 frames; the last frame is the last keyframe.
  [[nodiscard]] int frame_count() const noexcept;
  [[nodiscard]] Camera frame(int index) const;
  [[nodiscard]] std::vector<Camera> frames() const;

private:
  std::vector<Camera> keyframes_;
  int samples_;
};

} // namespace llff
