#include "rbl/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rbl/errors.hpp"

namespace rbl {

namespace {

constexpr double kCoincidenceTol = 1e-9;

bool all_finite(const Points2d& p) { return p.allFinite(); }

// Rank of the centred point cloud is 2.
bool spans_plane(const Points2d& p) {
  if (p.cols() < 3) return false;
  const Points2d centered = p.colwise() - p.rowwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(1) > 1e-9 * s(0);
}

bool pairwise_distinct(const Points2d& p) {
  for (Eigen::Index i = 0; i < p.cols(); ++i)
    for (Eigen::Index j = i + 1; j < p.cols(); ++j)
      if ((p.col(i) - p.col(j)).norm() <= kCoincidenceTol) return false;
  return true;
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back
  if (w >= std::numbers::pi) w -= kTwoPi;
  return w;
}

RotationMatrix RotationMatrix::from_angle(double angle) {
  if (!std::isfinite(angle)) throw InvalidInputError("rotation angle must be finite");
  RotationMatrix r;
  r.angle_ = angle;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r.matrix_ << c, -s, s, c;
  return r;
}

RotationMatrix RotationMatrix::from_matrix(const Eigen::Matrix2d& m, double tol) {
  if (!m.allFinite()) throw InvalidInputError("rotation matrix must be finite");
  const double ortho = (m.transpose() * m - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > tol || std::abs(m.determinant() - 1.0) > tol) {
    throw InvalidInputError("matrix is not a proper rotation");
  }
  return from_angle(std::atan2(m(1, 0), m(0, 0)));
}

Eigen::Matrix2d RotationMatrix::derivative() const {
  const double c = std::cos(angle_);
  const double s = std::sin(angle_);
  Eigen::Matrix2d d;
  d << -s, -c, c, -s;
  return d;
}

RotationMatrix rotation_from_angle(double angle) { return RotationMatrix::from_angle(angle); }

Conformation::Conformation(Points2d points) : points_(std::move(points)) {
  if (points_.cols() < 3) throw InvalidInputError("conformation needs at least 3 landmarks");
  if (!all_finite(points_)) throw InvalidInputError("conformation points must be finite");
  if (!pairwise_distinct(points_)) throw DegenerateGeometryError("conformation has coincident landmarks");
  if (!spans_plane(points_)) throw DegenerateGeometryError("conformation landmarks are collinear");
}

Conformation Conformation::centered() const {
  return Conformation(points_.colwise() - centroid());
}

AnchorSet::AnchorSet(Points2d positions) : positions_(std::move(positions)) {
  if (positions_.cols() < 3) throw InvalidInputError("at least 3 anchors are required");
  if (!all_finite(positions_)) throw InvalidInputError("anchor positions must be finite");
  if (!pairwise_distinct(positions_)) throw DegenerateGeometryError("anchors must be pairwise distinct");
  if (!spans_plane(positions_)) throw DegenerateGeometryError("anchors are collinear");
}

Points2d apply_pose(const Conformation& conformation, const Pose& pose) {
  if (!pose.translation.allFinite()) throw InvalidInputError("translation must be finite");
  return (pose.rotation.matrix() * conformation.points()).colwise() + pose.translation;
}

Scene::Scene(AnchorSet anchors, Conformation conformation, Pose pose)
    : anchors_(std::move(anchors)),
      conformation_(std::move(conformation)),
      pose_(pose),
      landmarks_(apply_pose(conformation_, pose_)) {
  Points2d all(2, num_nodes());
  all << anchors_.positions(), landmarks_;
  if (!pairwise_distinct(all)) throw DegenerateGeometryError("scene has coincident nodes");
}

Eigen::VectorXcd Scene::node_coordinates() const {
  Eigen::VectorXcd x(num_nodes());
  for (Eigen::Index m = 0; m < num_anchors(); ++m) x(m) = to_complex(anchors_.positions().col(m));
  for (Eigen::Index n = 0; n < num_landmarks(); ++n)
    x(num_anchors() + n) = to_complex(landmarks_.col(n));
  return x;
}

Scene Scene::with_pose(const Pose& pose) const { return Scene(anchors_, conformation_, pose); }

void SceneConfig::validate() const {
  if (!(room_width > 0.0) || !(room_height > 0.0)) throw ConfigError("room dimensions must be positive");
  if (num_anchors < 3 || num_anchors > 1000) throw ConfigError("num_anchors must be in [3, 1000]");
  if (num_landmarks < 3 || num_landmarks > 1000) throw ConfigError("num_landmarks must be in [3, 1000]");
  if (!(wall_margin >= 0.0)) throw ConfigError("wall_margin must be non-negative");
  if (max_retries < 1) throw ConfigError("max_retries must be positive");
  if (anchor_layout == AnchorLayout::kExplicit) {
    if (!anchor_positions) throw ConfigError("explicit anchor layout requires anchor positions");
    if (anchor_positions->cols() != num_anchors) throw ConfigError("anchor position count does not match num_anchors");
  }
  if (conformation_points) {
    if (conformation_points->cols() != num_landmarks)
      throw ConfigError("conformation point count does not match num_landmarks");
  } else if (!(polygon_radius > 0.0)) {
    throw ConfigError("polygon_radius must be positive");
  }
}

AnchorSet make_anchors(const SceneConfig& config) {
  if (config.anchor_layout == AnchorLayout::kExplicit) return AnchorSet(*config.anchor_positions);

  // Evenly spaced along the perimeter, counter-clockwise from (0, 0).
  const double w = config.room_width;
  const double h = config.room_height;
  const double perimeter = 2.0 * (w + h);
  Points2d a(2, config.num_anchors);
  for (int m = 0; m < config.num_anchors; ++m) {
    double s = perimeter * m / config.num_anchors;
    Eigen::Vector2d p;
    if (s < w) {
      p = {s, 0.0};
    } else if ((s -= w) < h) {
      p = {w, s};
    } else if ((s -= h) < w) {
      p = {w - s, h};
    } else {
      s -= w;
      p = {0.0, h - s};
    }
    a.col(m) = p;
  }
  return AnchorSet(std::move(a));
}

Conformation make_conformation(const SceneConfig& config) {
  if (config.conformation_points) return Conformation(*config.conformation_points).centered();
  Points2d c(2, config.num_landmarks);
  for (int n = 0; n < config.num_landmarks; ++n) {
    const double phi = 2.0 * std::numbers::pi * n / config.num_landmarks;
    c.col(n) << config.polygon_radius * std::cos(phi), config.polygon_radius * std::sin(phi);
  }
  return Conformation(std::move(c));
}

Pose sample_pose(const SceneConfig& config, const Conformation& conformation,
                 const AnchorSet& anchors, Rng& rng) {
  std::uniform_real_distribution<double> angle_dist(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    const auto rotation = RotationMatrix::from_angle(angle_dist(rng));
    const Points2d rotated = rotation.matrix() * conformation.points();
    const Eigen::Vector2d lo = rotated.rowwise().minCoeff();
    const Eigen::Vector2d hi = rotated.rowwise().maxCoeff();
    const double x0 = config.wall_margin - lo.x();
    const double x1 = config.room_width - config.wall_margin - hi.x();
    const double y0 = config.wall_margin - lo.y();
    const double y1 = config.room_height - config.wall_margin - hi.y();
    if (x1 < x0 || y1 < y0) continue;
    Pose pose{rotation, {x0 + (x1 - x0) * unit(rng), y0 + (y1 - y0) * unit(rng)}};

    const Points2d landmarks = apply_pose(conformation, pose);
    bool clear = true;
    for (Eigen::Index n = 0; n < landmarks.cols() && clear; ++n)
      for (Eigen::Index m = 0; m < anchors.size() && clear; ++m)
        clear = (landmarks.col(n) - anchors.positions().col(m)).norm() > kCoincidenceTol;
    if (clear) return pose;
  }
  std::ostringstream msg;
  msg << "could not place the body inside a " << config.room_width << "x" << config.room_height
      << " room after " << config.max_retries << " attempts";
  throw ConfigError(msg.str());
}

Scene random_scene(const SceneConfig& config, Rng& rng) {
  config.validate();
  AnchorSet anchors = make_anchors(config);
  Conformation conformation = make_conformation(config);
  const Pose pose = sample_pose(config, conformation, anchors, rng);
  return Scene(std::move(anchors), std::move(conformation), pose);
}

Scene random_scene(const SceneConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return random_scene(config, rng);
}

}  // namespace rbl
