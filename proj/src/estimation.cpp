#include "spooftrack/estimation.hpp"

#include <algorithm>

namespace stb {

Eigen::Matrix<double, 2, 4> measurement_matrix() {
  Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  return H;
}

Mat4 cv_transition(double dt) {
  Mat4 F = Mat4::Identity();
  F(0, 2) = dt;
  F(1, 3) = dt;
  return F;
}

Mat4 cv_process_noise(double dt, double q) {
  const double dt2 = dt * dt;
  const double a = q * dt2 * dt / 3.0;
  const double b = q * dt2 / 2.0;
  const double c = q * dt;
  Mat4 Q = Mat4::Zero();
  Q(0, 0) = a;
  Q(1, 1) = a;
  Q(0, 2) = Q(2, 0) = b;
  Q(1, 3) = Q(3, 1) = b;
  Q(2, 2) = c;
  Q(3, 3) = c;
  return Q;
}

KinematicEstimate kf_predict(const KinematicEstimate& est, double dt, double q) {
  if (!(dt > 0.0)) throw NumericError("kf_predict: dt must be positive");
  if (!est.x.allFinite() || !est.P.allFinite()) throw NumericError("kf_predict: non-finite state");
  const Mat4 F = cv_transition(dt);
  KinematicEstimate out;
  out.x = F * est.x;
  out.P = F * est.P * F.transpose() + cv_process_noise(dt, q);
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

Mat2 innovation_covariance(const KinematicEstimate& est, const Mat2& R) {
  return est.P.topLeftCorner<2, 2>() + R;
}

namespace {

Eigen::LLT<Mat2> factor_innovation(const Mat2& S) {
  Eigen::LLT<Mat2> llt(S);
  if (llt.info() != Eigen::Success || !S.allFinite()) {
    throw NumericError("innovation covariance is not positive definite");
  }
  return llt;
}

}  // namespace

KalmanUpdate kf_update(const KinematicEstimate& est, const Vec2& z, const Mat2& R) {
  const auto H = measurement_matrix();
  const Mat2 S = innovation_covariance(est, R);
  const auto llt = factor_innovation(S);
  const Vec2 nu = z - est.x.head<2>();
  // K = P H^T S^-1, computed as (S^-1 H P)^T.
  const Eigen::Matrix<double, 4, 2> K = llt.solve(H * est.P).transpose();
  const Mat4 I_KH = Mat4::Identity() - K * H;

  KalmanUpdate out;
  out.estimate.x = est.x + K * nu;
  out.estimate.P = I_KH * est.P * I_KH.transpose() + K * R * K.transpose();
  out.estimate.P = 0.5 * (out.estimate.P + out.estimate.P.transpose()).eval();
  out.innovation = nu;
  out.S = S;
  return out;
}

double mahalanobis2(const Vec2& z, const KinematicEstimate& est, const Mat2& R) {
  const Mat2 S = innovation_covariance(est, R);
  const Vec2 nu = z - est.x.head<2>();
  return std::max(0.0, nu.dot(factor_innovation(S).solve(nu)));
}

KinematicEstimate initiate_estimate(const Vec2& z, const Mat2& R, double v_max) {
  KinematicEstimate est;
  est.x << z.x(), z.y(), 0.0, 0.0;
  est.P.setZero();
  est.P.topLeftCorner<2, 2>() = R;
  est.P(2, 2) = v_max * v_max;
  est.P(3, 3) = v_max * v_max;
  return est;
}

GateResult gate(const DetectionFrame& frame, const KinematicEstimate& est, double gamma,
                TrackId track_id) {
  GateResult result{track_id, {}};
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const Detection& d = frame.detections[i];
    const Mat2 S = innovation_covariance(est, d.R);
    const Vec2 nu = d.z - est.x.head<2>();
    const double d2 = std::max(0.0, nu.dot(factor_innovation(S).solve(nu)));
    if (d2 <= gamma) result.pairs.push_back({i, d.detection_id, d2, S});
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const GatedPair& a, const GatedPair& b) { return a.detection_id < b.detection_id; });
  return result;
}

double min_eigenvalue(const Mat4& P) {
  const Mat4 sym = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace stb
