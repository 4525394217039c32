#include "rbl/procrustes.hpp"

#include <cmath>
#include <numeric>

#include "rbl/errors.hpp"

namespace rbl {

WeightSpec::WeightSpec(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInputError("weights must be finite and non-negative");
  if (!(sum() > 0.0)) throw InvalidInputError("weights must not all be zero");
}

double WeightSpec::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

namespace {

void check_shapes(const Points2d& a, const Points2d& b, const WeightSpec& w) {
  if (a.cols() != b.cols() || static_cast<std::size_t>(a.cols()) != w.size())
    throw InvalidInputError("point sets and weights must have matching sizes");
}

Eigen::Vector2d weighted_mean(const Points2d& p, const WeightSpec& w) {
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < p.cols(); ++i) acc += w.values()[static_cast<std::size_t>(i)] * p.col(i);
  return acc / w.sum();
}

}  // namespace

std::pair<Eigen::Vector2d, Eigen::Vector2d> weighted_means(const Points2d& points_s, const Points2d& points_c,
                                                           const WeightSpec& weights) {
  check_shapes(points_s, points_c, weights);
  return {weighted_mean(points_s, weights), weighted_mean(points_c, weights)};
}

double pose_objective(const Points2d& landmarks, const Points2d& body_points, const WeightSpec& weights,
                      const Eigen::Matrix2d& rotation, const Eigen::Vector2d& translation) {
  check_shapes(landmarks, body_points, weights);
  double g = 0.0;
  for (Eigen::Index i = 0; i < landmarks.cols(); ++i) {
    const Eigen::Vector2d r = landmarks.col(i) - (rotation * body_points.col(i) + translation);
    g += weights.values()[static_cast<std::size_t>(i)] * r.squaredNorm();
  }
  return g;
}

RigidAlignment align_points(const Points2d& source, const Points2d& target, const WeightSpec& weights,
                            bool allow_reflection) {
  check_shapes(target, source, weights);
  if (!source.allFinite() || !target.allFinite()) throw InvalidInputError("point sets must be finite");
  const auto [t_bar, s_bar] = weighted_means(target, source, weights);

  // H = sum w_i (source_i - s_bar)(target_i - t_bar)^T = U S V^T
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < source.cols(); ++i) {
    const double w = weights.values()[static_cast<std::size_t>(i)];
    h += w * (source.col(i) - s_bar) * (target.col(i) - t_bar).transpose();
  }
  const double scale = h.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DegenerateGeometryError("cross-covariance is zero; pose is undetermined");

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2d& u = svd.matrixU();
  const Eigen::Matrix2d& v = svd.matrixV();
  const Eigen::Vector2d& sv = svd.singularValues();
  if (!(sv(0) > 1e-14 * scale)) throw DegenerateGeometryError("cross-covariance is numerically rank zero");

  RigidAlignment out;
  const double det = (v * u.transpose()).determinant();
  Eigen::Matrix2d d = Eigen::Matrix2d::Identity();
  if (!allow_reflection && det < 0.0) {
    d(1, 1) = -1.0;
    out.ambiguous = std::abs(sv(0) - sv(1)) <= 1e-9 * sv(0);
  }
  out.linear = v * d * u.transpose();
  out.shift = t_bar - out.linear * s_bar;
  return out;
}

PoseEstimate estimate_pose(const Points2d& landmarks, const Points2d& body_points, const WeightSpec& weights) {
  if (landmarks.cols() < 2) throw InvalidInputError("pose estimation needs at least two landmarks");
  const RigidAlignment fit = align_points(body_points, landmarks, weights, false);
  PoseEstimate est;
  est.rotation = RotationMatrix::from_matrix(fit.linear);
  const auto [s_bar, c_bar] = weighted_means(landmarks, body_points, weights);
  est.translation = s_bar - est.rotation.matrix() * c_bar;
  est.objective = pose_objective(landmarks, body_points, weights, est.rotation.matrix(), est.translation);
  est.ambiguous = fit.ambiguous;
  return est;
}

PoseEstimate estimate_pose(const Points2d& landmarks, const Conformation& conformation,
                           const WeightSpec& weights) {
  return estimate_pose(landmarks, conformation.points(), weights);
}

PoseEstimate estimate_pose(const Points2d& landmarks, const Conformation& conformation) {
  return estimate_pose(landmarks, conformation.points(), WeightSpec::uniform(conformation.size()));
}

double rotation_mse(const RotationMatrix& estimate, const RotationMatrix& truth) {
  return (estimate.matrix() - truth.matrix()).squaredNorm();
}

}  // namespace rbl
