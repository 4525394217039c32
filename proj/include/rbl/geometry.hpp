#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Dense>

namespace rbl {

using Rng = std::mt19937_64;
using Points2d = Eigen::Matrix2Xd;

/// Planar rotation, kept consistent with its angle.
class RotationMatrix {
 public:
  RotationMatrix() = default;

  static RotationMatrix from_angle(double angle);
  /// Projects onto SO(2) through the angle of the first column; rejects
  /// matrices that are not orthonormal with det +1 within `tol`.
  static RotationMatrix from_matrix(const Eigen::Matrix2d& m, double tol = 1e-9);

  double angle() const { return angle_; }
  const Eigen::Matrix2d& matrix() const { return matrix_; }
  /// dQ/dalpha
  Eigen::Matrix2d derivative() const;

  RotationMatrix inverse() const { return from_angle(-angle_); }
  RotationMatrix operator*(const RotationMatrix& other) const {
    return from_angle(angle_ + other.angle_);
  }

 private:
  double angle_ = 0.0;
  Eigen::Matrix2d matrix_ = Eigen::Matrix2d::Identity();
};

RotationMatrix rotation_from_angle(double angle);

struct Pose {
  RotationMatrix rotation;
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();
};

/// Body-frame landmark coordinates, one column per landmark.
class Conformation {
 public:
  explicit Conformation(Points2d points);

  const Points2d& points() const { return points_; }
  Eigen::Index size() const { return points_.cols(); }
  Eigen::Vector2d centroid() const { return points_.rowwise().mean(); }
  /// Same shape translated so that the centroid sits at the origin.
  Conformation centered() const;

 private:
  Points2d points_;
};

class AnchorSet {
 public:
  explicit AnchorSet(Points2d positions);

  const Points2d& positions() const { return positions_; }
  Eigen::Index size() const { return positions_.cols(); }

 private:
  Points2d positions_;
};

/// S = Q C + t 1^T
Points2d apply_pose(const Conformation& conformation, const Pose& pose);

class Scene {
 public:
  Scene(AnchorSet anchors, Conformation conformation, Pose pose);

  const AnchorSet& anchors() const { return anchors_; }
  const Conformation& conformation() const { return conformation_; }
  const Pose& pose() const { return pose_; }
  const Points2d& landmarks() const { return landmarks_; }

  Eigen::Index num_anchors() const { return anchors_.size(); }
  Eigen::Index num_landmarks() const { return conformation_.size(); }
  Eigen::Index num_nodes() const { return num_anchors() + num_landmarks(); }

  /// Anchors first, then landmarks, as complex numbers x = a + jb.
  Eigen::VectorXcd node_coordinates() const;
  Scene with_pose(const Pose& pose) const;

 private:
  AnchorSet anchors_;
  Conformation conformation_;
  Pose pose_;
  Points2d landmarks_;
};

enum class AnchorLayout { kPerimeter, kExplicit };

struct SceneConfig {
  double room_width = 10.0;
  double room_height = 10.0;
  int num_anchors = 8;
  int num_landmarks = 8;
  AnchorLayout anchor_layout = AnchorLayout::kPerimeter;
  std::optional<Points2d> anchor_positions;
  /// Explicit body-frame points; re-centred on their centroid when used.
  std::optional<Points2d> conformation_points;
  double polygon_radius = 1.0;
  /// Minimum clearance between landmarks and the walls.
  double wall_margin = 0.5;
  int max_retries = 1000;

  void validate() const;
};

AnchorSet make_anchors(const SceneConfig& config);
Conformation make_conformation(const SceneConfig& config);
Pose sample_pose(const SceneConfig& config, const Conformation& conformation,
                 const AnchorSet& anchors, Rng& rng);

Scene random_scene(const SceneConfig& config, Rng& rng);
Scene random_scene(const SceneConfig& config, std::uint64_t seed);

/// Wraps to [-pi, pi).
double wrap_angle(double angle);

inline std::complex<double> to_complex(const Eigen::Vector2d& p) { return {p.x(), p.y()}; }
inline Eigen::Vector2d to_vector(std::complex<double> z) { return {z.real(), z.imag()}; }

}  // namespace rbl
