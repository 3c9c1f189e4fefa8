#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace llff {

/// Point or configuration lies behind a camera.
class BehindCameraError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Scene depth range collapses (z_min == z_max): interval is unbounded.
class DegenerateSceneError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Blend mode cannot be applied to the given poses.
class ModeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed file; carries the byte offset (or line number for text formats).
/// `offset` is a byte offset for binary inputs and a 1-based line number for text.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& message, std::uint64_t offset, const std::string& unit = "offset")
      : std::runtime_error(message + " (at " + unit + " " + std::to_string(offset) + ")"),
        message_{message},
        unit_{unit},
        offset_{offset} {}
  [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }
  [[nodiscard]] const std::string& unit() const noexcept { return unit_; }

private:
  std::string message_;
  std::string unit_;
  std::uint64_t offset_;
};

} // namespace llff
