#include "rbl/crlb.hpp"

#include <cmath>
#include <limits>

#include "rbl/errors.hpp"

namespace rbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ray {
  Eigen::Vector2d unit;
  double length;
  Eigen::Vector2d lever;  // dQ/dalpha * c_n
};

Ray ray_to(const Eigen::Vector2d& anchor, const Eigen::Vector2d& body_point, const Pose& pose) {
  const Eigen::Vector2d s = pose.rotation.matrix() * body_point + pose.translation;
  const Eigen::Vector2d diff = s - anchor;
  const double d = diff.norm();
  if (!(d > 0.0)) throw DegenerateGeometryError("landmark coincides with an anchor");
  return {diff / d, d, pose.rotation.derivative() * body_point};
}

}  // namespace

bool FisherInformation::bounded() const { return std::isfinite(crlb_t) && std::isfinite(crlb_alpha); }

Eigen::Vector3d range_gradient(const Eigen::Vector2d& anchor, const Eigen::Vector2d& body_point, const Pose& pose) {
  const Ray r = ray_to(anchor, body_point, pose);
  return {r.unit.x(), r.unit.y(), r.unit.dot(r.lever)};
}

Eigen::Vector3d bearing_gradient(const Eigen::Vector2d& anchor, const Eigen::Vector2d& body_point, const Pose& pose) {
  const Ray r = ray_to(anchor, body_point, pose);
  const Eigen::Vector2d perp(-r.unit.y(), r.unit.x());
  return Eigen::Vector3d(perp.x(), perp.y(), perp.dot(r.lever)) / r.length;
}

double bearing_intensity(double rho) {
  if (!(rho >= 0.0) || std::isinf(rho)) throw InvalidInputError("bearing information needs a finite concentration");
  return rho * bessel_ratio(rho);
}

FisherInformation bounds_from_fim(const Eigen::Matrix3d& fim) {
  FisherInformation out;
  out.matrix = 0.5 * (fim + fim.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(out.matrix);
  const auto& ev = eig.eigenvalues();
  if (!(ev(2) > 0.0) || ev(0) <= 1e-12 * ev(2)) {
    out.crlb_t = out.crlb_alpha = out.crlb_q = kInf;
    return out;
  }
  const Eigen::Matrix3d inv = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.crlb_t = inv(0, 0) + inv(1, 1);
  out.crlb_alpha = inv(2, 2);
  // |Q(a + e) - Q(a)|_F^2 = 4 sin^2(e / 2) ~ 2 e^2
  out.crlb_q = 2.0 * out.crlb_alpha;
  return out;
}

FisherInformation compute_fim(const Scene& scene, const NoiseConfig& noise, FimTerms terms) {
  noise.validate();
  if (terms.distances && !(noise.sigma > 0.0))
    throw InvalidInputError("range information needs sigma > 0");
  const double range_weight = terms.distances ? 1.0 / (noise.sigma * noise.sigma) : 0.0;
  const double bearing_weight = terms.bearings ? bearing_intensity(noise.rho) : 0.0;

  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  const Points2d& body = scene.conformation().points();
  for (Eigen::Index m = 0; m < scene.num_anchors(); ++m) {
    const Eigen::Vector2d anchor = scene.anchors().positions().col(m);
    for (Eigen::Index n = 0; n < scene.num_landmarks(); ++n) {
      if (range_weight > 0.0) {
        const Eigen::Vector3d g = range_gradient(anchor, body.col(n), scene.pose());
        f += range_weight * g * g.transpose();
      }
      if (bearing_weight > 0.0) {
        const Eigen::Vector3d g = bearing_gradient(anchor, body.col(n), scene.pose());
        f += bearing_weight * g * g.transpose();
      }
    }
  }
  return bounds_from_fim(f);
}

std::vector<CrlbPoint> crlb_curve(const Scene& scene, const std::vector<double>& sigma_grid, double zeta,
                                  FimTerms terms) {
  if (sigma_grid.empty()) throw InvalidInputError("sigma grid is empty");
  const double rho = terms.bearings ? zeta_to_rho(zeta) : 0.0;
  std::vector<CrlbPoint> out;
  out.reserve(sigma_grid.size());
  for (double sigma : sigma_grid) {
    NoiseConfig noise;
    noise.sigma = sigma;
    noise.rho = rho;
    const FisherInformation fim = compute_fim(scene, noise, terms);
    out.push_back({sigma, fim.crlb_t, fim.crlb_alpha, fim.crlb_q});
  }
  return out;
}

}  // namespace rbl
