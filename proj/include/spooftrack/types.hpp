#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stb {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

using PlatformId = int;
using TrackId = int;
using DetectionId = std::int64_t;
using Timestep = int;

/// Axis-aligned rectangle in meters.
struct Box {
  double x_min = -600.0;
  double x_max = 600.0;
  double y_min = -600.0;
  double y_max = 600.0;

  [[nodiscard]] bool contains(const Vec2& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  [[nodiscard]] double area() const { return (x_max - x_min) * (y_max - y_min); }
  [[nodiscard]] bool valid() const { return x_max > x_min && y_max > y_min; }
};

/// Raised for malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for filesystem failures (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical precondition fails (singular innovation, NaN state).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpoofType { Clean, Drift, Ghost, Mirror };

[[nodiscard]] std::string to_string(SpoofType type);
/// Accepts "clean", "drift", "ghost", "mirror" (case-insensitive).
[[nodiscard]] SpoofType parse_spoof_type(const std::string& name);

}  // namespace stb
