#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rbl/edges.hpp"
#include "rbl/geometry.hpp"
#include "rbl/measurements.hpp"

namespace rbl {

enum class SolverMethod { kMds, kSmdsFull, kSmdsDistanceOnly };

std::string_view to_string(SolverMethod method);
SolverMethod parse_solver_method(std::string_view name);
std::vector<SolverMethod> all_solver_methods();

struct SolverConfig {
  int max_iterations = 100;
  double rel_tolerance = 1e-9;
  SolverMethod method = SolverMethod::kSmdsFull;

  void validate() const;
};

struct LandmarkEstimate {
  Points2d coordinates;
  int iterations_used = 0;
  bool converged = true;
  /// Final relative update norm of the iterative solver; zero for closed-form methods.
  double residual = 0.0;
};

/// Dominant eigenpair of the (Hermitian part of the) kernel, scaled to an
/// edge vector. The eigenvector of v^* v^T is proportional to v^*, so the
/// result is conjugated and its residual unit phase is fitted against the
/// known AA edges. An empty `reference_aa` skips the phase fit.
Eigen::VectorXcd rank1_truncate(const Eigen::MatrixXcd& kernel, const Eigen::VectorXcd& reference_aa);

/// Anchored least-squares inversion of the AT edges: each target is the mean
/// of a_m + v_(m,n) over the anchors.
Points2d coordinates_from_edges(const Eigen::VectorXcd& v_at, const AnchorSet& anchors, const PairIndex& index);
Points2d coordinates_from_edges(const Eigen::VectorXcd& v_at, const Points2d& anchor_positions,
                                const PairIndex& index);

/// Initial AT estimate combining the K1 and K4 blocks.
Eigen::VectorXcd turbo_init(const Eigen::MatrixXcd& k1, const Eigen::MatrixXcd& k4, const Eigen::VectorXcd& v_aa,
                            const Eigen::VectorXcd& v_tt);

struct TurboResult {
  Eigen::VectorXcd v_at;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

/// Fixed-point iteration on the AT column of the kernel, stopping when the
/// relative update drops below the tolerance.
TurboResult turbo_iterate(const MinorBlocks& minor, const Eigen::VectorXcd& v_aa, const Eigen::VectorXcd& v_tt,
                          const Eigen::VectorXcd& v_at_init, const SolverConfig& config);

/// Classical MDS embedding (2 x T) of a full symmetric distance matrix.
/// A rank-one Gram matrix yields a zero second coordinate.
Points2d mds_embedding(const Eigen::MatrixXd& distances);

/// Symmetric T x T distance matrix from per-pair distances.
Eigen::MatrixXd distance_matrix(const Eigen::VectorXd& distances, const PairIndex& index);

struct MdsResult {
  /// All nodes, anchors first, after alignment onto the known anchors.
  Points2d nodes;
  Points2d targets() const { return nodes.rightCols(nodes.cols() - anchor_count); }
  Eigen::Index anchor_count = 0;
};

MdsResult classic_mds_nodes(const Eigen::VectorXd& distances, const AnchorSet& anchors, const PairIndex& index);
Points2d classic_mds(const Eigen::VectorXd& distances, const AnchorSet& anchors, const PairIndex& index);

/// arg(x_j - x_i) for every pair, with AA bearings taken from the anchors.
Eigen::VectorXd reconstruct_angles(const Eigen::VectorXcd& coordinates, const PairIndex& index,
                                   const AnchorSet& anchors);

LandmarkEstimate solve_landmarks(const MeasurementSet& meas, const AnchorSet& anchors,
                                 const Conformation& conformation, const SolverConfig& config);

}  // namespace rbl
