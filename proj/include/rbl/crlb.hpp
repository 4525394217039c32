#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rbl/geometry.hpp"
#include "rbl/measurements.hpp"

namespace rbl {

/// Which AT measurement types contribute information.
struct FimTerms {
  bool distances = true;
  bool bearings = true;
};

/// Joint Fisher information over (t_x, t_y, alpha) and the bounds derived
/// from it. Bounds are +infinity when the matrix is singular.
struct FisherInformation {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  /// Trace of the translation block of the inverse, m^2.
  double crlb_t = 0.0;
  /// Variance bound on the rotation angle, rad^2.
  double crlb_alpha = 0.0;
  /// Bound on |Q_hat - Q|_F^2, taken as 2 * crlb_alpha.
  double crlb_q = 0.0;

  bool bounded() const;
};

/// Gradient of the anchor -> landmark range with respect to (t, alpha).
Eigen::Vector3d range_gradient(const Eigen::Vector2d& anchor, const Eigen::Vector2d& body_point, const Pose& pose);
/// Gradient of the anchor -> landmark bearing with respect to (t, alpha).
Eigen::Vector3d bearing_gradient(const Eigen::Vector2d& anchor, const Eigen::Vector2d& body_point, const Pose& pose);

/// Information carried by one bearing measurement with von Mises concentration rho.
double bearing_intensity(double rho);

FisherInformation bounds_from_fim(const Eigen::Matrix3d& fim);
FisherInformation compute_fim(const Scene& scene, const NoiseConfig& noise, FimTerms terms = {});

struct CrlbPoint {
  double sigma = 0.0;
  double crlb_t = 0.0;
  double crlb_alpha = 0.0;
  double crlb_q = 0.0;
};

std::vector<CrlbPoint> crlb_curve(const Scene& scene, const std::vector<double>& sigma_grid, double zeta,
                                  FimTerms terms = {});

}  // namespace rbl
