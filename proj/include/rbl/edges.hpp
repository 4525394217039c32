#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rbl/geometry.hpp"
#include "rbl/measurements.hpp"
#include "rbl/pair_index.hpp"

namespace rbl {

/// Incidence matrix mapping node coordinates onto edges, v = C x. Row p
/// holds -1 in column i and +1 in column j for the pair (i, j).
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(const PairIndex& index);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const std::vector<Eigen::Triplet<double>>& triplets() const { return triplets_; }

  Eigen::SparseMatrix<double> to_sparse() const;
  Eigen::MatrixXd to_dense() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Eigen::Triplet<double>> triplets_;
};

CoefficientMatrix build_coefficient_matrix(const PairIndex& index);

/// Complex edges v_p = x_j - x_i = d_p exp(j theta_p) in canonical pair order.
class EdgeSet {
 public:
  EdgeSet(PairIndex index, Eigen::VectorXcd values);

  const PairIndex& index() const { return index_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

  Eigen::VectorXcd aa() const { return values_.segment(0, sz(index_.size_aa())); }
  Eigen::VectorXcd at() const { return values_.segment(sz(index_.offset_at()), sz(index_.size_at())); }
  Eigen::VectorXcd tt() const { return values_.segment(sz(index_.offset_tt()), sz(index_.size_tt())); }

 private:
  static Eigen::Index sz(std::size_t n) { return static_cast<Eigen::Index>(n); }

  PairIndex index_;
  Eigen::VectorXcd values_;
};

EdgeSet edges_from_coordinates(const Eigen::VectorXcd& x, const PairIndex& index);
EdgeSet edges_from_measurements(const MeasurementSet& meas);
/// Exact AA edges from the known anchor positions.
Eigen::VectorXcd anchor_edges(const AnchorSet& anchors);

/// The AT column of the kernel: K1 = v_AA^* v_AT^T, K3 = v_AT^* v_AT^T and
/// K4 = v_AT^* v_TT^T.
struct MinorBlocks {
  Eigen::MatrixXcd k1;
  Eigen::MatrixXcd k3;
  Eigen::MatrixXcd k4;

  /// [K1; K3; K4^H] = [v_AA^*; v_AT^*; v_TT^*] v_AT^T
  Eigen::MatrixXcd stacked() const;
};

/// Edge kernel K = v^* v^T, kept in factored form. Blocks are only formed
/// when requested.
class KernelBlocks {
 public:
  explicit KernelBlocks(EdgeSet edges) : edges_(std::move(edges)) {}

  const EdgeSet& edges() const { return edges_; }

  Eigen::MatrixXcd k_a() const { return outer(edges_.aa(), edges_.aa()); }
  Eigen::MatrixXcd k1() const { return outer(edges_.aa(), edges_.at()); }
  Eigen::MatrixXcd k2() const { return outer(edges_.aa(), edges_.tt()); }
  Eigen::MatrixXcd k3() const { return outer(edges_.at(), edges_.at()); }
  Eigen::MatrixXcd k4() const { return outer(edges_.at(), edges_.tt()); }
  Eigen::MatrixXcd k_t() const { return outer(edges_.tt(), edges_.tt()); }

  /// Full P x P matrix. The kernel is Hermitian, so the blocks below the
  /// diagonal are the adjoints of K1, K2 and K4.
  Eigen::MatrixXcd assemble() const;

 private:
  // a^* b^T
  static Eigen::MatrixXcd outer(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.conjugate() * b.transpose();
  }

  EdgeSet edges_;
};

KernelBlocks build_kernel(const EdgeSet& edges);
MinorBlocks extract_minor(const KernelBlocks& kernel);

}  // namespace rbl
