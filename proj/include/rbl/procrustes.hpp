#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rbl/geometry.hpp"

namespace rbl {

/// Non-negative per-landmark weights for the pose fit.
class WeightSpec {
 public:
  explicit WeightSpec(std::vector<double> weights);
  static WeightSpec uniform(Eigen::Index n) { return WeightSpec(std::vector<double>(static_cast<std::size_t>(n), 1.0)); }

  const std::vector<double>& values() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double sum() const;

 private:
  std::vector<double> weights_;
};

/// Weighted centroids (s_bar, c_bar) of two point sets.
std::pair<Eigen::Vector2d, Eigen::Vector2d> weighted_means(const Points2d& points_s, const Points2d& points_c,
                                                           const WeightSpec& weights);

/// G = sum_i w_i |s_i - (Q c_i + t)|^2
double pose_objective(const Points2d& landmarks, const Points2d& body_points, const WeightSpec& weights,
                      const Eigen::Matrix2d& rotation, const Eigen::Vector2d& translation);

struct PoseEstimate {
  RotationMatrix rotation;
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();
  double objective = 0.0;
  /// Equal singular values with a reflection correction: the optimum is not unique.
  bool ambiguous = false;

  Pose pose() const { return {rotation, translation}; }
};

/// Closed-form weighted least-squares fit of landmarks ~ Q * body + t with Q in SO(2).
PoseEstimate estimate_pose(const Points2d& landmarks, const Points2d& body_points, const WeightSpec& weights);
PoseEstimate estimate_pose(const Points2d& landmarks, const Conformation& conformation,
                           const WeightSpec& weights);
PoseEstimate estimate_pose(const Points2d& landmarks, const Conformation& conformation);

/// Orthogonal map (possibly improper) plus shift taking `source` onto `target`.
struct RigidAlignment {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d shift = Eigen::Vector2d::Zero();
  bool ambiguous = false;

  Points2d apply(const Points2d& points) const { return (linear * points).colwise() + shift; }
};

RigidAlignment align_points(const Points2d& source, const Points2d& target, const WeightSpec& weights,
                            bool allow_reflection);

/// |Q_hat - Q|_F^2
double rotation_mse(const RotationMatrix& estimate, const RotationMatrix& truth);

}  // namespace rbl
