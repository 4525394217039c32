#include "rbl/solvers.hpp"

#include <cmath>
#include <complex>

#include "rbl/errors.hpp"
#include "rbl/procrustes.hpp"

namespace rbl {

namespace {

constexpr double kDivergenceFactor = 1e6;

Eigen::Index sz(std::size_t n) { return static_cast<Eigen::Index>(n); }

void check_index(const PairIndex& index, const AnchorSet& anchors) {
  if (index.num_anchors() != anchors.size())
    throw InvalidInputError("pair index anchor count does not match the anchor set");
}

LandmarkEstimate smds_from_measurements(const MeasurementSet& meas, const AnchorSet& anchors,
                                        const SolverConfig& config) {
  const EdgeSet edges = edges_from_measurements(meas);
  const MinorBlocks minor = extract_minor(build_kernel(edges));
  const Eigen::VectorXcd v_aa = anchor_edges(anchors);
  const Eigen::VectorXcd v_tt = edges.tt();
  const Eigen::VectorXcd init = turbo_init(minor.k1, minor.k4, v_aa, v_tt);
  const TurboResult turbo = turbo_iterate(minor, v_aa, v_tt, init, config);

  LandmarkEstimate est;
  est.coordinates = coordinates_from_edges(turbo.v_at, anchors, meas.index);
  est.iterations_used = turbo.iterations;
  est.converged = turbo.converged;
  est.residual = turbo.residual;
  return est;
}

}  // namespace

std::string_view to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::kMds: return "mds";
    case SolverMethod::kSmdsFull: return "smds_full";
    case SolverMethod::kSmdsDistanceOnly: return "smds_distance_only";
  }
  return "?";
}

SolverMethod parse_solver_method(std::string_view name) {
  for (SolverMethod m : all_solver_methods())
    if (to_string(m) == name) return m;
  throw ConfigError("unknown solver method '" + std::string(name) + "'");
}

std::vector<SolverMethod> all_solver_methods() {
  return {SolverMethod::kMds, SolverMethod::kSmdsDistanceOnly, SolverMethod::kSmdsFull};
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(rel_tolerance > 0.0)) throw ConfigError("rel_tolerance must be positive");
}

Eigen::VectorXcd rank1_truncate(const Eigen::MatrixXcd& kernel, const Eigen::VectorXcd& reference_aa) {
  if (kernel.rows() != kernel.cols() || kernel.rows() == 0) throw InvalidInputError("kernel must be square");
  if (!kernel.allFinite()) throw InvalidInputError("kernel must be finite");
  if (reference_aa.size() > kernel.rows()) throw InvalidInputError("reference block is larger than the kernel");

  const Eigen::MatrixXcd hermitian = 0.5 * (kernel + kernel.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian);
  if (eig.info() != Eigen::Success) throw NumericalFailureError("kernel eigendecomposition failed");
  const Eigen::Index top = kernel.rows() - 1;
  const double lambda = eig.eigenvalues()(top);
  if (!(lambda > 0.0)) throw DegenerateGeometryError("kernel has no positive dominant eigenvalue");

  Eigen::VectorXcd v = (std::sqrt(lambda) * eig.eigenvectors().col(top)).conjugate();
  if (reference_aa.size() > 0) {
    const std::complex<double> c = v.head(reference_aa.size()).dot(reference_aa);
    if (!(std::abs(c) > 0.0)) throw DegenerateGeometryError("edge estimate is orthogonal to the AA reference");
    v *= c / std::abs(c);
  }
  return v;
}

Points2d coordinates_from_edges(const Eigen::VectorXcd& v_at, const Points2d& anchor_positions,
                                const PairIndex& index) {
  const int m = index.num_anchors();
  const int n = index.num_targets();
  if (m == 0 || anchor_positions.cols() == 0) throw InvalidInputError("no anchors: target coordinates are underdetermined");
  if (anchor_positions.cols() != m) throw InvalidInputError("pair index anchor count does not match the anchors");
  if (v_at.size() != sz(index.size_at())) throw InvalidInputError("AT edge vector has the wrong length");

  Points2d targets = Points2d::Zero(2, n);
  for (int a = 0; a < m; ++a)
    for (int t = 0; t < n; ++t) {
      const std::complex<double> x = to_complex(anchor_positions.col(a)) + v_at(sz(index.at_slot(a, t)));
      targets.col(t) += to_vector(x);
    }
  return targets / static_cast<double>(m);
}

Points2d coordinates_from_edges(const Eigen::VectorXcd& v_at, const AnchorSet& anchors, const PairIndex& index) {
  return coordinates_from_edges(v_at, anchors.positions(), index);
}

Eigen::VectorXcd turbo_init(const Eigen::MatrixXcd& k1, const Eigen::MatrixXcd& k4, const Eigen::VectorXcd& v_aa,
                            const Eigen::VectorXcd& v_tt) {
  if (k1.rows() != v_aa.size() || k4.cols() != v_tt.size() || k1.cols() != k4.rows())
    throw InvalidInputError("kernel blocks and edge vectors have inconsistent sizes");
  const double denom = v_aa.squaredNorm() + v_tt.squaredNorm();
  if (!(denom > 0.0)) throw DegenerateGeometryError("known edges are all zero");
  // conj(K4) v_TT = v_AT |v_TT|^2 in the noise-free case, matching K1^T v_AA.
  return (k1.transpose() * v_aa + k4.conjugate() * v_tt) / denom;
}

TurboResult turbo_iterate(const MinorBlocks& minor, const Eigen::VectorXcd& v_aa, const Eigen::VectorXcd& v_tt,
                          const Eigen::VectorXcd& v_at_init, const SolverConfig& config) {
  config.validate();
  if (minor.k1.rows() != v_aa.size() || minor.k4.cols() != v_tt.size() || minor.k3.rows() != v_at_init.size() ||
      minor.k3.cols() != v_at_init.size() || minor.k1.cols() != v_at_init.size() || minor.k4.rows() != v_at_init.size())
    throw InvalidInputError("kernel minor and edge vectors have inconsistent sizes");
  if (!v_at_init.allFinite()) throw InvalidInputError("initial AT estimate must be finite");

  // The AA and TT contributions do not change between iterations.
  const Eigen::VectorXcd known = minor.k1.transpose() * v_aa + minor.k4.conjugate() * v_tt;
  const double known_energy = v_aa.squaredNorm() + v_tt.squaredNorm();
  const Eigen::MatrixXcd k3t = minor.k3.transpose();
  const double init_norm = v_at_init.norm();

  TurboResult out;
  out.v_at = v_at_init;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const double denom = known_energy + out.v_at.squaredNorm();
    if (!(denom > 0.0)) throw DegenerateGeometryError("turbo update has a zero denominator");
    Eigen::VectorXcd next = (known + k3t * out.v_at) / denom;
    if (!next.allFinite()) throw NumericalFailureError("turbo iteration produced non-finite values");
    if (init_norm > 0.0 && next.norm() > kDivergenceFactor * init_norm)
      throw NumericalFailureError("turbo iteration diverged");

    const double prev_norm = out.v_at.norm();
    const double step = (next - out.v_at).norm();
    out.residual = prev_norm > 0.0 ? step / prev_norm : step;
    out.v_at = std::move(next);
    out.iterations = it;
    if (out.residual < config.rel_tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Eigen::MatrixXd distance_matrix(const Eigen::VectorXd& distances, const PairIndex& index) {
  if (distances.size() != sz(index.size())) throw InvalidInputError("distance vector does not match the pair index");
  const int t = index.num_nodes();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(t, t);
  for (std::size_t p = 0; p < index.size(); ++p) {
    d(index[p].i, index[p].j) = distances(sz(p));
    d(index[p].j, index[p].i) = distances(sz(p));
  }
  return d;
}

Points2d mds_embedding(const Eigen::MatrixXd& distances) {
  const Eigen::Index t = distances.rows();
  if (t != distances.cols() || t < 2) throw InvalidInputError("distance matrix must be square with at least 2 nodes");
  if (!distances.allFinite()) throw InvalidInputError("distance matrix must be finite");

  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(t, t) - Eigen::MatrixXd::Constant(t, t, 1.0 / t);
  const Eigen::MatrixXd gram = -0.5 * j * sq * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (gram + gram.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalFailureError("Gram eigendecomposition failed");

  const double l1 = eig.eigenvalues()(t - 1);
  const double l2 = eig.eigenvalues()(t - 2);
  if (!(l1 > 1e-12)) throw DegenerateGeometryError("Gram matrix has no positive eigenvalue");
  Points2d x = Points2d::Zero(2, t);
  x.row(0) = std::sqrt(l1) * eig.eigenvectors().col(t - 1).transpose();
  if (l2 > 1e-12 * l1) x.row(1) = std::sqrt(l2) * eig.eigenvectors().col(t - 2).transpose();
  return x;
}

MdsResult classic_mds_nodes(const Eigen::VectorXd& distances, const AnchorSet& anchors, const PairIndex& index) {
  check_index(index, anchors);
  const Points2d embedded = mds_embedding(distance_matrix(distances, index));
  const Eigen::Index m = anchors.size();
  const RigidAlignment fit =
      align_points(embedded.leftCols(m), anchors.positions(), WeightSpec::uniform(m), /*allow_reflection=*/true);
  return {fit.apply(embedded), m};
}

Points2d classic_mds(const Eigen::VectorXd& distances, const AnchorSet& anchors, const PairIndex& index) {
  return classic_mds_nodes(distances, anchors, index).targets();
}

Eigen::VectorXd reconstruct_angles(const Eigen::VectorXcd& coordinates, const PairIndex& index,
                                   const AnchorSet& anchors) {
  if (coordinates.size() != index.num_nodes()) throw InvalidInputError("coordinate vector does not match the node count");
  check_index(index, anchors);
  Eigen::VectorXd angles(sz(index.size()));
  for (std::size_t p = 0; p < index.size(); ++p) {
    const auto& pr = index[p];
    std::complex<double> v;
    if (index.pair_class(p) == PairClass::kAnchorAnchor) {
      v = to_complex(anchors.positions().col(pr.j)) - to_complex(anchors.positions().col(pr.i));
    } else {
      v = coordinates(pr.j) - coordinates(pr.i);
    }
    if (std::abs(v) <= 1e-12) throw DegenerateGeometryError("reconstructed nodes coincide");
    angles(sz(p)) = wrap_angle(std::arg(v));
  }
  return angles;
}

LandmarkEstimate solve_landmarks(const MeasurementSet& meas, const AnchorSet& anchors,
                                 const Conformation& conformation, const SolverConfig& config) {
  config.validate();
  meas.validate();
  check_index(meas.index, anchors);
  if (meas.index.num_targets() != conformation.size())
    throw InvalidInputError("measurement target count does not match the conformation");

  switch (config.method) {
    case SolverMethod::kMds: {
      LandmarkEstimate est;
      est.coordinates = classic_mds(meas.distances, anchors, meas.index);
      return est;
    }
    case SolverMethod::kSmdsFull:
      return smds_from_measurements(meas, anchors, config);
    case SolverMethod::kSmdsDistanceOnly: {
      const MdsResult mds = classic_mds_nodes(meas.distances, anchors, meas.index);
      const Eigen::Index m = anchors.size();
      Eigen::VectorXcd x(meas.index.num_nodes());
      for (Eigen::Index a = 0; a < m; ++a) x(a) = to_complex(anchors.positions().col(a));
      for (Eigen::Index n = 0; n < conformation.size(); ++n) x(m + n) = to_complex(mds.nodes.col(m + n));

      MeasurementSet rebuilt = meas;
      rebuilt.angles = reconstruct_angles(x, meas.index, anchors);
      if (!meas.noisy_tt) {
        const auto off = sz(meas.index.offset_tt());
        const auto len = sz(meas.index.size_tt());
        rebuilt.angles.segment(off, len) = meas.angles.segment(off, len);
      }
      return smds_from_measurements(rebuilt, anchors, config);
    }
  }
  throw InvalidInputError("unknown solver method");
}

}  // namespace rbl
