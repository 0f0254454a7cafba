#pragma once

#include "spooftrack/sensing.hpp"
#include "spooftrack/types.hpp"

#include <vector>

namespace stb {

/// State (px, py, vx, vy) and its covariance.
struct KinematicEstimate {
  Vec4 x = Vec4::Zero();
  Mat4 P = Mat4::Identity();

  [[nodiscard]] Vec2 position() const { return x.head<2>(); }
  [[nodiscard]] Vec2 velocity() const { return x.tail<2>(); }
};

struct KalmanUpdate {
  KinematicEstimate estimate;
  Vec2 innovation = Vec2::Zero();
  Mat2 S = Mat2::Identity();
};

/// Position-only measurement matrix.
[[nodiscard]] Eigen::Matrix<double, 2, 4> measurement_matrix();

/// Constant-velocity transition for one axis pair.
[[nodiscard]] Mat4 cv_transition(double dt);

/// Continuous white-noise acceleration process noise with intensity q (m^2/s^3).
[[nodiscard]] Mat4 cv_process_noise(double dt, double q);

[[nodiscard]] KinematicEstimate kf_predict(const KinematicEstimate& est, double dt, double q);

/// Joseph-form update; the returned covariance is symmetrized.
/// Throws NumericError when S is not positive definite.
[[nodiscard]] KalmanUpdate kf_update(const KinematicEstimate& est, const Vec2& z, const Mat2& R);

[[nodiscard]] Mat2 innovation_covariance(const KinematicEstimate& est, const Mat2& R);

/// nu^T S^-1 nu with nu = z - Hx and S = H P H^T + R.
[[nodiscard]] double mahalanobis2(const Vec2& z, const KinematicEstimate& est, const Mat2& R);

/// Track initialised from a single detection: velocity zero with variance v_max^2.
[[nodiscard]] KinematicEstimate initiate_estimate(const Vec2& z, const Mat2& R, double v_max);

struct GatedPair {
  /// Index into the frame's detection list.
  std::size_t detection_index = 0;
  DetectionId detection_id = 0;
  double d2 = 0.0;
  Mat2 S = Mat2::Identity();
};

struct GateResult {
  TrackId track_id = -1;
  std::vector<GatedPair> pairs;
};

/// Detections with d^2 <= gamma, ordered by detection id. Each detection is
/// gated with its own measurement covariance.
[[nodiscard]] GateResult gate(const DetectionFrame& frame, const KinematicEstimate& est,
                              double gamma, TrackId track_id = -1);

/// Smallest eigenvalue of the symmetric part of P.
[[nodiscard]] double min_eigenvalue(const Mat4& P);

}  // namespace stb
