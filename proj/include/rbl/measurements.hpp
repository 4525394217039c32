#pragma once

#include <limits>

#include <Eigen/Dense>

#include "rbl/geometry.hpp"
#include "rbl/pair_index.hpp"

namespace rbl {

/// Probability mass of the centred interval used to define the angular
/// error bound zeta.
inline constexpr double kAngularPercentile = 0.9;

/// Range and bearing noise settings. AA measurements are always exact and AT
/// measurements always noisy; TT measurements are exact unless `noisy_tt`.
struct NoiseConfig {
  /// Standard deviation of the gamma range error, meters.
  double sigma = 0.0;
  /// Von Mises concentration of the bearing error. Infinity means exact bearings.
  double rho = std::numeric_limits<double>::infinity();
  bool noisy_tt = false;

  static NoiseConfig from_zeta(double sigma, double zeta, bool noisy_tt = false);
  void validate() const;
};

/// One distance and one bearing per canonical pair. Bearings are measured
/// against the world x-axis, along the edge i -> j.
struct MeasurementSet {
  PairIndex index;
  Eigen::VectorXd distances;
  Eigen::VectorXd angles;
  bool noisy_tt = false;

  std::size_t size() const { return index.size(); }
  PairClass pair_class(std::size_t p) const { return index.pair_class(p); }
  /// True when the pair's values carry simulated noise.
  bool is_noisy(std::size_t p) const;
  void validate() const;
};

double sample_distance(double true_distance, double sigma, Rng& rng);
/// Von Mises draw centred on `true_theta`, wrapped to [-pi, pi).
double sample_angle(double true_theta, double rho, Rng& rng);

/// I1(rho) / I0(rho), the mean resultant length of a von Mises law.
double bessel_ratio(double rho);

/// Mass of the centred von Mises density on [-zeta, zeta].
double angular_interval_mass(double rho, double zeta);
double zeta_to_rho(double zeta);
double rho_to_zeta(double rho);

MeasurementSet generate_measurements(const Scene& scene, const NoiseConfig& noise, Rng& rng);

/// Noise-free distances and bearings of every canonical pair of the scene.
MeasurementSet exact_measurements(const Scene& scene);

}  // namespace rbl
