#include "rbl/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_sf_bessel.h>

#include "rbl/errors.hpp"

namespace rbl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxZeta = 0.9 * kPi;

// Above this concentration the Best-Fisher envelope loses precision and the
// wrapped normal N(0, 1/rho) is indistinguishable from the von Mises law.
constexpr double kNormalApproxRho = 1e6;
// Below this the draw is uniform on the circle for all practical purposes.
constexpr double kUniformRho = 1e-8;

double integrate(const auto& f, double a, double b) {
  if (b <= a) return 0.0;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Deep refinement only chases round-off on the far tail for large rho.
  return Quad::integrate(f, a, b, 10, 1e-14);
}

}  // namespace

NoiseConfig NoiseConfig::from_zeta(double sigma, double zeta, bool noisy_tt) {
  NoiseConfig n;
  n.sigma = sigma;
  n.rho = zeta_to_rho(zeta);
  n.noisy_tt = noisy_tt;
  n.validate();
  return n;
}

void NoiseConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInputError("sigma must be finite and non-negative");
  if (!(rho >= 0.0)) throw InvalidInputError("rho must be non-negative");
}

bool MeasurementSet::is_noisy(std::size_t p) const {
  switch (pair_class(p)) {
    case PairClass::kAnchorAnchor: return false;
    case PairClass::kAnchorTarget: return true;
    case PairClass::kTargetTarget: return noisy_tt;
  }
  return true;
}

void MeasurementSet::validate() const {
  const auto n = static_cast<Eigen::Index>(index.size());
  if (distances.size() != n || angles.size() != n)
    throw InvalidInputError("measurement vectors do not match the pair index");
  if (!(distances.array() > 0.0).all() || !distances.allFinite())
    throw InvalidInputError("measured distances must be positive and finite");
  if (!angles.allFinite()) throw InvalidInputError("measured angles must be finite");
}

double sample_distance(double true_distance, double sigma, Rng& rng) {
  if (!(true_distance > 0.0) || !std::isfinite(true_distance))
    throw InvalidInputError("true distance must be positive");
  if (!(sigma >= 0.0)) throw InvalidInputError("sigma must be non-negative");
  if (sigma == 0.0) return true_distance;
  const double shape = (true_distance / sigma) * (true_distance / sigma);
  const double scale = sigma * sigma / true_distance;
  std::gamma_distribution<double> gamma(shape, scale);
  // Tiny shapes can underflow to zero; measured ranges must stay positive.
  double d = 0.0;
  do {
    d = gamma(rng);
  } while (!(d > 0.0));
  return d;
}

double sample_angle(double true_theta, double rho, Rng& rng) {
  if (!(rho >= 0.0)) throw InvalidInputError("rho must be non-negative");
  if (!std::isfinite(true_theta)) throw InvalidInputError("angle must be finite");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (std::isinf(rho)) return wrap_angle(true_theta);
  if (rho < kUniformRho) return wrap_angle(true_theta + kPi * (2.0 * unit(rng) - 1.0));
  if (rho > kNormalApproxRho) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(rho));
    return wrap_angle(true_theta + normal(rng));
  }

  // Best & Fisher (1979) rejection sampler.
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * rho * rho);
  const double r0 = (tau - std::sqrt(2.0 * tau)) / (2.0 * rho);
  const double r = (1.0 + r0 * r0) / (2.0 * r0);
  double f = 0.0;
  while (true) {
    const double z = std::cos(kPi * unit(rng));
    f = (1.0 + r * z) / (r + z);
    const double c = rho * (r - f);
    const double u2 = unit(rng);
    if (c * (2.0 - c) - u2 > 0.0) break;
    if (std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double offset = std::acos(std::clamp(f, -1.0, 1.0));
  return wrap_angle(unit(rng) < 0.5 ? true_theta - offset : true_theta + offset);
}

double bessel_ratio(double rho) {
  if (!(rho >= 0.0)) throw InvalidInputError("rho must be non-negative");
  if (rho == 0.0) return 0.0;
  if (std::isinf(rho)) return 1.0;
  return gsl_sf_bessel_I1_scaled(rho) / gsl_sf_bessel_I0_scaled(rho);
}

double angular_interval_mass(double rho, double zeta) {
  if (!(rho >= 0.0) || std::isinf(rho)) throw InvalidInputError("rho must be finite and non-negative");
  if (!(zeta >= 0.0)) throw InvalidInputError("zeta must be non-negative");
  if (zeta >= kPi) return 1.0;
  if (rho == 0.0) return zeta / kPi;
  // Unnormalised density shifted by its maximum so large rho stays finite.
  const auto density = [rho](double t) { return std::exp(rho * (std::cos(t) - 1.0)); };
  const double inner = integrate(density, 0.0, zeta);
  // exp(-rho (1 - cos zeta)) underflows: nothing left outside the interval.
  const double outer = rho * (1.0 - std::cos(zeta)) > 745.0 ? 0.0 : integrate(density, zeta, kPi);
  return inner / (inner + outer);
}

double rho_to_zeta(double rho) {
  if (!(rho >= 0.0) || std::isinf(rho)) throw InvalidInputError("rho must be finite and non-negative");
  if (rho == 0.0) return kMaxZeta;
  const auto excess = [rho](double zeta) { return angular_interval_mass(rho, zeta) - kAngularPercentile; };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      excess, 0.0, kPi, -kAngularPercentile, 1.0 - kAngularPercentile,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (lo + hi);
}

double zeta_to_rho(double zeta) {
  if (!(zeta > 0.0) || zeta > kMaxZeta * (1.0 + 1e-15))
    throw InvalidInputError("zeta must lie in (0, 0.9 pi]");
  if (zeta >= kMaxZeta) return 0.0;
  const auto excess = [zeta](double rho) { return angular_interval_mass(rho, zeta) - kAngularPercentile; };
  double hi = 1.0;
  double f_hi = excess(hi);
  while (f_hi <= 0.0) {
    hi *= 4.0;
    if (hi > 1e18) throw NumericalFailureError("zeta is too small to map onto a concentration");
    f_hi = excess(hi);
  }
  std::uintmax_t max_iter = 300;
  const auto [lo, up] = boost::math::tools::toms748_solve(
      excess, 0.0, hi, zeta / kPi - kAngularPercentile, f_hi,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (lo + up);
}

MeasurementSet exact_measurements(const Scene& scene) {
  MeasurementSet out;
  out.index = build_pair_index(static_cast<int>(scene.num_anchors()), static_cast<int>(scene.num_landmarks()));
  const Eigen::VectorXcd x = scene.node_coordinates();
  const auto p_count = static_cast<Eigen::Index>(out.index.size());
  out.distances.resize(p_count);
  out.angles.resize(p_count);
  for (Eigen::Index p = 0; p < p_count; ++p) {
    const auto& pr = out.index[p];
    const std::complex<double> v = x(pr.j) - x(pr.i);
    out.distances(p) = std::abs(v);
    out.angles(p) = wrap_angle(std::arg(v));
  }
  return out;
}

MeasurementSet generate_measurements(const Scene& scene, const NoiseConfig& noise, Rng& rng) {
  noise.validate();
  MeasurementSet out = exact_measurements(scene);
  out.noisy_tt = noise.noisy_tt;
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (!out.is_noisy(p)) continue;
    const auto k = static_cast<Eigen::Index>(p);
    out.distances(k) = sample_distance(out.distances(k), noise.sigma, rng);
    out.angles(k) = sample_angle(out.angles(k), noise.rho, rng);
  }
  return out;
}

}  // namespace rbl
